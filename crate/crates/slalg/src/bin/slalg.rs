fn main() {
    std::process::exit(slalg::cli::main_entry(std::env::args_os()));
}
