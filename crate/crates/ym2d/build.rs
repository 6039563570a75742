fn main() {
    // ndarray's "blas" feature resolves cblas_* at link time; use the system OpenBLAS.
    println!("cargo:rustc-link-arg=-lopenblas");
}
