fn main() {
    let (code, stdout) = skewmatch_cli::run(std::env::args_os());
    if !stdout.is_empty() {
        println!("{stdout}");
    }
    std::process::exit(code);
}
