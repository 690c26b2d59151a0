fn main() {
    std::process::exit(tamechow_cli::run(std::env::args_os()));
}
