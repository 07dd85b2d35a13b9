use std::path::PathBuf;
use std::process::Command;

/// Run the fermat3 binary with the given arguments; return (exit code,
/// stdout, stderr).
pub fn run_cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fermat3"))
        .args(args)
        .output()
        .expect("fermat3 binary runs");
    (
        out.status.code().expect("process not killed by signal"),
        String::from_utf8(out.stdout).expect("stdout is utf8"),
        String::from_utf8(out.stderr).expect("stderr is utf8"),
    )
}

/// Write `contents` to a unique temp file and return its path.
pub fn temp_file(tag: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!(
        "fermat3-test-{}-{}-{tag}",
        std::process::id(),
        std::thread::current().name().unwrap_or("t").replace("::", "-"),
    ));
    std::fs::write(&path, contents).expect("temp file written");
    path
}

/// Flag set for the two-term shift instance a=(1,0,0), b=(0,1,0), alpha=1,
/// c=2*pi*i: the classical instance whose amplitude is 2^(-1/3).
pub const SHIFT_INSTANCE: &[&str] = &[
    "--a", "1,0", "0,0", "0,0",
    "--b", "0,0", "1,0", "0,0",
    "--alpha", "1,0",
    "--c", "0,6.283185307179586",
];
