fn main() {
    std::process::exit(cone_systole::cli::run());
}
