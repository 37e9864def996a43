fn main() {
    std::process::exit(twomode::cli::main(std::env::args_os()));
}
