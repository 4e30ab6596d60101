fn main() {
    std::process::exit(snumbers_cli::run());
}
