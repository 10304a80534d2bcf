fn main() {
    std::process::exit(ris_ce::harness::cli::cli_main(std::env::args_os()));
}
