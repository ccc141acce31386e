use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let (code, out, err) = basisdiv_cli::main_with_args(&args);
    std::io::stdout().write_all(&out).expect("stdout");
    std::io::stderr().write_all(&err).expect("stderr");
    std::process::exit(code);
}
