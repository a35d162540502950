fn main() {
    std::process::exit(lwr_merge::cli::main(std::env::args_os()));
}
