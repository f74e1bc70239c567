fn main() {
    // CLI entry point; subcommands are wired up in later modules.
    eprintln!("qdeform: no subcommand");
    std::process::exit(2);
}
