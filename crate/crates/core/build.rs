use std::process::Command;

fn main() {
    println!("cargo:rerun-if-changed=../../.git/HEAD");
    println!("cargo:rerun-if-changed=../../.git/refs");
    let out = Command::new("git")
        .args(["describe", "--tags", "--always"])
        .output();
    if let Ok(out) = out {
        if out.status.success() {
            let v = String::from_utf8_lossy(&out.stdout).trim().to_string();
            if !v.is_empty() {
                println!("cargo:rustc-env=RISCE_GIT_DESCRIBE={v}");
            }
        }
    }
}
