use std::env;

fn main() {
    println!("cargo:rerun-if-env-changed=HDF5_LIB_DIR");
    println!("cargo:rerun-if-env-changed=HDF5_LIB_NAME");
    if let Ok(dir) = env::var("HDF5_LIB_DIR") {
        println!("cargo:rustc-link-search=native={dir}");
    } else {
        for dir in ["/usr/lib/x86_64-linux-gnu", "/usr/lib/aarch64-linux-gnu", "/usr/lib64", "/usr/local/lib"] {
            if std::path::Path::new(dir).exists() {
                println!("cargo:rustc-link-search=native={dir}");
            }
        }
    }
    let name = env::var("HDF5_LIB_NAME").unwrap_or_else(|_| {
        // Debian ships the serial flavour under a suffixed name.
        if std::path::Path::new("/usr/lib/x86_64-linux-gnu/libhdf5_serial.so").exists()
            || std::path::Path::new("/usr/lib/aarch64-linux-gnu/libhdf5_serial.so").exists()
        {
            "hdf5_serial".to_string()
        } else {
            "hdf5".to_string()
        }
    });
    println!("cargo:rustc-link-lib=dylib={name}");
}
