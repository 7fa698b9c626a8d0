fn main() {
    let code = schmidt_bench::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
