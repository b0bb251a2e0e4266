fn main() {
    std::process::exit(reeb_spectra::cli::main());
}
