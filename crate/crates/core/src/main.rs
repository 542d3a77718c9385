fn main() {
    std::process::exit(nnls_spectra::cli::dispatch(std::env::args_os()));
}
