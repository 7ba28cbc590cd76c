//! Regenerates `include/wallach.h` from the public C ABI on every build.
//! The header is committed so C consumers can use the crate without running
//! the Rust toolchain; this script keeps the committed copy in sync.

use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(std::env::var("CARGO_MANIFEST_DIR").unwrap());
    let header = crate_dir.join("include/wallach.h");
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");

    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            bindings.write_to_file(&header);
        }
        Err(e) => {
            // Keep the committed header usable even if generation fails in
            // a constrained environment.
            println!("cargo:warning=cbindgen failed, keeping committed header: {e}");
        }
    }
}
