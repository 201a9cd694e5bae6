fn main() {
    std::process::exit(arnoldi_or_cli::run());
}
