fn main() {
    std::process::exit(bqpvol::cli::run());
}
