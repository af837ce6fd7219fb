fn main() { std::process::exit(qes::cli::run()); }
