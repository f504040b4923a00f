fn main() { std::process::exit(hilbchow_cli::run(std::env::args().collect())) }
