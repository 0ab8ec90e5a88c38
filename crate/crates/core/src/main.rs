fn main() {
    let args: Vec<std::ffi::OsString> = std::env::args_os().collect();
    std::process::exit(entdyn::io::cli::cli_main(args));
}
