use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let result = k3lat::run(&args);
    let out = k3lat::render(&result, k3lat::wants_json(&args));
    if result.code == k3lat::EXIT_USAGE {
        eprint!("{out}");
    } else {
        let _ = std::io::stdout().write_all(out.as_bytes());
    }
    std::process::exit(result.code);
}
