fn main() {
    std::process::exit(torifan::cli::run());
}
