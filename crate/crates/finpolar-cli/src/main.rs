fn main() {
    eprintln!("finpolar: command-line interface not wired up yet");
    std::process::exit(2);
}
