fn main() {
    std::process::exit(supent::harness::cli::cli_main(std::env::args_os()));
}
