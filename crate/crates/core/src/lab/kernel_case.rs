use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelCase {
    /// 1: `|x-y| ≤ |x-z|/2` or `|x-y| ≤ |y-z|/2`; otherwise 2 if
    /// `|x-z| ≤ |y-z|`, else 3.
    pub case: u8,
    /// `||x-z|^{β-n} - |y-z|^{β-n}|`.
    pub lhs: f64,
    /// `|x-y|^ε d^{β-ε-n}` with `d = max(|x-z|, |y-z|)`, `|x-z|` or `|y-z|`
    /// for cases 1, 2 and 3.
    pub rhs: f64,
    pub pass: bool,
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

/// Classifies `(x, y, z) ⊂ R^n` and tests `lhs ≤ c · rhs`.
pub fn kernel_case_check(
    x: &[f64],
    y: &[f64],
    z: &[f64],
    beta: f64,
    eps: f64,
    c: f64,
) -> Result<KernelCase> {
    let n = x.len();
    if n == 0 || y.len() != n || z.len() != n {
        return Err(Error::ShapeMismatch("points must share a positive dimension".into()));
    }
    let nf = n as f64;
    if !(beta > 0.0 && beta < nf) {
        return Err(Error::param("beta", beta, format!("needs beta in (0, {n})")));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::param("eps", eps, "needs eps in (0, 1]"));
    }
    let dxy = euclid(x, y);
    let dxz = euclid(x, z);
    let dyz = euclid(y, z);
    if dxz == 0.0 || dyz == 0.0 {
        return Err(Error::Degenerate("z coincides with x or y".into()));
    }
    let (case, d) = if dxy <= 0.5 * dxz || dxy <= 0.5 * dyz {
        (1, dxz.max(dyz))
    } else if dxz <= dyz {
        (2, dxz)
    } else {
        (3, dyz)
    };
    let lhs = (dxz.powf(beta - nf) - dyz.powf(beta - nf)).abs();
    let rhs = dxy.powf(eps) * d.powf(beta - eps - nf);
    Ok(KernelCase {
        case,
        lhs,
        rhs,
        pass: lhs <= c * rhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseStats {
    pub case: u8,
    pub samples: usize,
    pub worst_ratio: f64,
    /// `lhs` and `rhs` of the worst sample.
    pub worst_lhs: f64,
    pub worst_rhs: f64,
    pub violations: usize,
}

/// Draws random triples until every case has `per_case` samples. Offsets
/// `y - x` and `z - x` have log-uniform lengths in `[1e-3, 1e1]` and uniform
/// directions, so all three cases occur with comparable frequency.
pub fn kernel_case_sweep(
    n: usize,
    beta: f64,
    eps: f64,
    per_case: usize,
    seed: u64,
    c: f64,
) -> Result<[CaseStats; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = [1u8, 2, 3].map(|case| CaseStats {
        case,
        samples: 0,
        worst_ratio: 0.0,
        worst_lhs: 0.0,
        worst_rhs: 0.0,
        violations: 0,
    });
    let direction = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let l = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if l > 1e-3 && l <= 1.0 {
                return v.into_iter().map(|a| a / l).collect();
            }
        }
    };
    let mut guard = 0usize;
    while stats.iter().any(|s| s.samples < per_case) {
        guard += 1;
        if guard > 1000 * per_case.max(1) {
            return Err(Error::Degenerate("kernel case sampler starved".into()));
        }
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let ry = 10f64.powf(rng.gen_range(-3.0..1.0));
        let rz = 10f64.powf(rng.gen_range(-3.0..1.0));
        let dy = direction(&mut rng);
        let dz = direction(&mut rng);
        let y: Vec<f64> = x.iter().zip(&dy).map(|(a, d)| a + ry * d).collect();
        let z: Vec<f64> = x.iter().zip(&dz).map(|(a, d)| a + rz * d).collect();
        let Ok(k) = kernel_case_check(&x, &y, &z, beta, eps, c) else {
            continue;
        };
        let s = &mut stats[(k.case - 1) as usize];
        if s.samples >= per_case {
            continue;
        }
        s.samples += 1;
        let ratio = k.lhs / k.rhs;
        if ratio > s.worst_ratio {
            s.worst_ratio = ratio;
            s.worst_lhs = k.lhs;
            s.worst_rhs = k.rhs;
        }
        if !k.pass {
            s.violations += 1;
        }
    }
    Ok(stats)
}
