fn main() {
    std::process::exit(qgame::cli::run());
}
