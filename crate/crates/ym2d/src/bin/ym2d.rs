fn main() {
    println!("ym2d");
}
