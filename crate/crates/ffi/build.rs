fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    #[cfg(feature = "gen_h")]
    {
        let dir = std::env::var("CARGO_MANIFEST_DIR").expect("set by cargo");
        cbindgen::Builder::new()
            .with_crate(&dir)
            .with_language(cbindgen::Language::C)
            .with_include_guard("GALOIS_POINTS_H")
            .generate()
            .expect("header generation")
            .write_to_file(format!("{dir}/include/galois_points.h"));
    }
}
