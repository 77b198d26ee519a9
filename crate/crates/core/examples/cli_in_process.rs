//! Drives the command-line front end from code: the same subcommands as the
//! `spinramp` binary, with output written to a directory.

fn main() {
    let out = std::env::temp_dir().join("spinramp-example");
    let out = out.to_string_lossy();
    let code = spinramp::cli::run(["spinramp", "--out", &out, "spectrum", "ising", "--n", "5", "--g", "0:0.5:3"]);
    println!("spectrum exit code {code}, files in {out}");
    let code = spinramp::cli::run(["spinramp", "scan", "rate", "--n", "21", "--rate=-0.01,-0.1,-1"]);
    println!("scan exit code {code}");
}
