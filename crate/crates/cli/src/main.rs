fn main() {
    std::process::exit(trinoperm_cli::run(std::env::args_os()));
}
