fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(normext_cli::run(&argv));
}
