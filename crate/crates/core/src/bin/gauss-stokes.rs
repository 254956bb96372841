fn main() {
    let code = gauss_stokes::cli::run(std::env::args_os());
    std::process::exit(code);
}
