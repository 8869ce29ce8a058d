fn main() {
    std::process::exit(satd::cli::run());
}
