#![allow(dead_code)]

use std::collections::BTreeSet;

use affinelens::enumerate::Region;
use affinelens::oracle::PatternSet;
use affinelens::{EnumerationResult, HPolytope};
use rand::Rng;

pub fn keys(result: &EnumerationResult) -> BTreeSet<String> {
    result.regions.iter().map(|r| r.sign_key.to_bitstring()).collect()
}

pub fn oracle_keys(set: &PatternSet) -> BTreeSet<String> {
    set.patterns.iter().map(|p| p.to_bitstring()).collect()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

pub fn arrangement_bound(m: usize, d: usize) -> u64 {
    (0..=d.min(m) as u64).map(|i| binomial(m as u64, i)).sum()
}

/// Smallest `Ax + b` value over the rows, with each row scaled to a unit normal.
pub fn slack(poly: &HPolytope, x: &[f64]) -> f64 {
    poly.halfspaces()
        .iter()
        .map(|h| {
            let n = h.normal.iter().map(|v| v * v).sum::<f64>().sqrt();
            let v = h.normal.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + h.offset;
            if n == 0.0 {
                v
            } else {
                v / n
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// A random point strictly inside `region`: walk from the representative
/// toward a uniform point of `[-1,1]^d` and stop at a uniform fraction of the
/// distance to the boundary along that ray.
pub fn interior_point<R: Rng>(region: &Region, rng: &mut R) -> Vec<f64> {
    let c = &region.representative;
    let d = c.len();
    loop {
        let target: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let dir: Vec<f64> = target.iter().zip(c).map(|(t, c)| t - c).collect();
        let mut tmax = f64::INFINITY;
        for h in region.polytope.halfspaces() {
            let rate: f64 = h.normal.iter().zip(&dir).map(|(a, b)| a * b).sum();
            let value: f64 = h.normal.iter().zip(c).map(|(a, b)| a * b).sum::<f64>() + h.offset;
            if rate < 0.0 {
                tmax = tmax.min(value / -rate);
            }
        }
        if !tmax.is_finite() || tmax <= 0.0 {
            continue;
        }
        let t = rng.random_range(0.0..1.0) * tmax * 0.999;
        return c.iter().zip(&dir).map(|(c, v)| c + t * v).collect();
    }
}

/// Point lists of every `<polygon class="region" ...>` element.
pub fn svg_region_polygons(svg: &str) -> Vec<Vec<[f64; 2]>> {
    svg.lines()
        .filter(|l| l.contains("<polygon") && l.contains(r#"class="region""#))
        .map(|l| {
            let start = l.find("points=\"").expect("points attribute") + 8;
            let end = start + l[start..].find('"').expect("closing quote");
            l[start..end]
                .split_whitespace()
                .map(|pair| {
                    let (x, y) = pair.split_once(',').expect("x,y pair");
                    [x.parse().unwrap(), y.parse().unwrap()]
                })
                .collect()
        })
        .collect()
}

pub fn shoelace(points: &[[f64; 2]]) -> f64 {
    let n = points.len();
    let mut s = 0.0;
    for i in 0..n {
        let (p, q) = (points[i], points[(i + 1) % n]);
        s += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * s.abs()
}
