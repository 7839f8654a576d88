fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(thermoplate::cli::run(&argv));
}
