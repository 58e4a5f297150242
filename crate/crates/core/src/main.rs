fn main() {
    std::process::exit(stokesdd::cli::cli_main(std::env::args_os()));
}
