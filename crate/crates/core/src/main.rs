fn main() {
    std::process::exit(quasilattice::cli::run(std::env::args_os()));
}
