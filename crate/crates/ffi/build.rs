use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = env::var("CARGO_MANIFEST_DIR").unwrap();
    let out = PathBuf::from(&crate_dir).join("include").join("paramine.h");
    println!("cargo:rerun-if-changed=src/lib.rs");

    let mut config = cbindgen::Config {
        usize_is_size_t: true,
        ..Default::default()
    };
    // C enumerators share one namespace: ParamineStatus_Ok, ParamineLabel_Good...
    config.enumeration.prefix_with_name = true;

    cbindgen::Builder::new()
        .with_config(config)
        .with_crate(&crate_dir)
        .with_language(cbindgen::Language::C)
        .with_include_guard("PARAMINE_H")
        .with_cpp_compat(true)
        .with_documentation(true)
        .with_style(cbindgen::Style::Both)
        .with_no_includes()
        .with_sys_include("stdbool.h")
        .with_sys_include("stddef.h")
        .with_sys_include("stdint.h")
        .generate()
        .expect("unable to generate C header")
        .write_to_file(out);
}
