//! Command-line front end. Grows alongside the library; see `--help`.

fn main() {
    eprintln!("cvmbqc: command-line interface not wired up yet");
    std::process::exit(2);
}
