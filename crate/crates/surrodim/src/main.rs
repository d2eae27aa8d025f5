fn main() {
    std::process::exit(surrodim::cli::run());
}
