use std::{env, path::Path};

fn main() {
    // The netlib backend emits `-lcblas`, which Debian does not ship as a
    // standalone library; alias the system OpenBLAS (which exports the CBLAS
    // symbols) under that name.
    let out = env::var("OUT_DIR").unwrap();
    let link = Path::new(&out).join("libcblas.so");
    if !link.exists() {
        for cand in [
            "/usr/lib/x86_64-linux-gnu/libopenblas.so",
            "/usr/lib/libopenblas.so",
            "/usr/lib64/libopenblas.so",
        ] {
            if Path::new(cand).exists() {
                let _ = std::os::unix::fs::symlink(cand, &link);
                break;
            }
        }
    }
    println!("cargo:rustc-link-search=native={out}");
}
