fn main() {
    std::process::exit(kernelforge::cli::cli_main(std::env::args_os()));
}
