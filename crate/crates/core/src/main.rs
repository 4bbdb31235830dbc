fn main() {
    std::process::exit(arsarc::cli::main());
}
