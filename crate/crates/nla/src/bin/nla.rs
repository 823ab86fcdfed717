fn main() {
    std::process::exit(nla::cli::main_entry());
}
