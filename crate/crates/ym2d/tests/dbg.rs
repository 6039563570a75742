#[test]
fn dbg_keys() {
    use ym2d::planar_map::examples::*;
    use ym2d::planar_map::*;
    use ym2d::master_field::canonical_key;
    let ex = standard_example(ExampleName::FigureEight, &[1.0, 1.0]).unwrap();
    let scan = crossing_frames(&ex.map, &ex.loops["L"]).unwrap();
    let (l1, l2) = split_loop(&ex.loops["L"], &scan.frames[0]);
    let (m1, w1, g1) = reduce_subloop(&ex.map, &l1).unwrap();
    let (m2, w2, g2) = reduce_subloop(&ex.map, &l2).unwrap();
    let a1 = g1.merge_areas(&ex.areas, &m1).unwrap();
    let a2 = g2.merge_areas(&ex.areas, &m2).unwrap();
    println!("k1 = {}", canonical_key(&m1, &w1, Some(&a1)));
    println!("k2 = {}", canonical_key(&m2, &w2, Some(&a2)));
}
