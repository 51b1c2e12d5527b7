use std::process::exit;

fn main() {
    let args: Vec<_> = std::env::args_os().collect();
    let code = gerbes::cli::run(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    exit(code);
}
