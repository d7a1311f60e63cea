fn main() {
    let code = oscone::cli::run(std::env::args_os());
    std::process::exit(code);
}
