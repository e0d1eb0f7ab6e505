fn main() {
    std::process::exit(coniccurv_cli::run(std::env::args_os()));
}
