#![allow(dead_code)]

use biring::exactla::{int, RatMatrix};
use biring::systems::LinearSystem;
use biring::LinRecSequence;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn seq(initial: &[i64], coeffs: &[i64]) -> LinRecSequence {
    LinRecSequence::from_ints(initial, coeffs).unwrap()
}

/// Integral sequence of order `r` with small random coefficients and initial terms.
pub fn random_integral_sequence(rng: &mut ChaCha8Rng, r: usize) -> LinRecSequence {
    let coeffs: Vec<i64> = (0..r).map(|_| rng.gen_range(-3..=3)).collect();
    let initial: Vec<i64> = (0..r).map(|_| rng.gen_range(-5..=5)).collect();
    seq(&initial, &coeffs)
}

/// Twenty fixed sequences: named families followed by seeded random
/// integral recurrences of orders 1 through 4.
pub fn corpus() -> Vec<(String, LinRecSequence)> {
    let mut out = vec![
        ("fibonacci".to_string(), LinRecSequence::fibonacci()),
        ("lucas".to_string(), LinRecSequence::lucas()),
        (
            "geometric 1·2^n".to_string(),
            LinRecSequence::geometric(int(1), int(2)),
        ),
        (
            "geometric 3·(-2)^n".to_string(),
            LinRecSequence::geometric(int(3), int(-2)),
        ),
        ("constant 5".to_string(), LinRecSequence::constant(int(5))),
        ("zero".to_string(), LinRecSequence::zero()),
        ("unit".to_string(), LinRecSequence::unit()),
        ("interleaved 1,0,2,0,4".to_string(), seq(&[1, 0], &[0, 2])),
        ("interleaved 0,1,0,3,0,9".to_string(), seq(&[0, 1], &[0, 3])),
        ("pell".to_string(), seq(&[0, 1], &[2, 1])),
        ("tribonacci".to_string(), seq(&[0, 0, 1], &[1, 1, 1])),
        ("period 3".to_string(), seq(&[1, 2, 3], &[0, 0, 1])),
    ];
    let mut rng = rng(0xC0FFEE);
    let mut r = 1;
    while out.len() < 20 {
        let f = random_integral_sequence(&mut rng, r);
        out.push((format!("random order {r} {f:?}"), f));
        r = r % 4 + 1;
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> RatMatrix {
    RatMatrix::from_fn(rows, cols, |_, _| int(rng.gen_range(-bound..=bound)))
}

pub fn random_system(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> LinearSystem {
    LinearSystem::new(
        random_matrix(rng, n, n, bound),
        random_matrix(rng, n, 1, bound),
        random_matrix(rng, 1, n, bound),
    )
    .unwrap()
}

/// Rejection-samples until `accept` holds.
pub fn random_system_where(
    rng: &mut ChaCha8Rng,
    n: usize,
    bound: i64,
    accept: impl Fn(&LinearSystem) -> bool,
) -> LinearSystem {
    loop {
        let s = random_system(rng, n, bound);
        if accept(&s) {
            return s;
        }
    }
}
