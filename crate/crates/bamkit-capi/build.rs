fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").expect("cargo sets the manifest dir");
    let header = format!("{crate_dir}/include/bamkit.h");
    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            bindings.write_to_file(&header);
        }
        // The committed header keeps consumers building when cbindgen
        // itself cannot run (for example during vendored offline builds).
        Err(e) => println!("cargo:warning=skipping header regeneration: {e}"),
    }
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
}
