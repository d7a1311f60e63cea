use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let header = crate_dir.join("include").join("oscone.h");
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            std::fs::create_dir_all(header.parent().unwrap()).ok();
            bindings.write_to_file(&header);
        }
        Err(e) => {
            // Keep the committed header usable when cbindgen cannot run.
            println!("cargo:warning=cbindgen failed: {e}");
        }
    }
}
