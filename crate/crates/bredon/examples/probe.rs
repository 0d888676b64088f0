use bredon::abgrp::matrix::{kernel, IntMatrix};
use bredon::abgrp::{Complex, FgAbPresentation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = std::time::Duration::ZERO;
    for case in 0..3000 {
        let r = rng.gen_range(1..=5usize);
        let c = rng.gen_range(1..=5usize);
        let rows: Vec<Vec<i64>> =
            (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let d0 = IntMatrix::from_rows_i64(&rows);
        let t0 = Instant::now();
        let left_kernel = kernel(&d0.transpose());
        let d1 = left_kernel.transpose();
        let cx = Complex::new(
            vec![
                FgAbPresentation::free(d0.cols()),
                FgAbPresentation::free(d0.rows()),
                FgAbPresentation::free(d1.rows()),
            ],
            vec![d0.clone(), d1.clone()],
        );
        cx.validate().unwrap();
        for n in 0..cx.len() {
            let _ = cx.cohomology_normal_form(n);
        }
        let el = t0.elapsed();
        if el > worst {
            worst = el;
            println!("case {case}: new worst {el:?} ({r}x{c})");
        }
    }
    println!("done, worst {worst:?}");
}
