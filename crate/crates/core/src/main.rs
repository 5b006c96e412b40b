use std::io::Write;

fn main() {
    let (code, text) = sphere_rigidity::cli::run_from_args(std::env::args_os());
    if !text.is_empty() {
        if code == 2 {
            let _ = write!(std::io::stderr(), "{text}");
        } else {
            print!("{text}");
        }
    }
    std::process::exit(code);
}
