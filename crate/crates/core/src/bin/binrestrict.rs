fn main() {
    std::process::exit(binrestrict::cli::main_exit_code());
}
