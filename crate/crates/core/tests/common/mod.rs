//! Helpers shared by the oracle and acceptance suites: independent
//! quadrature, finite differences, and seeded random instance generators.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use circle_pattern::fixtures::{genus_two_octagon, torus_grid};
use circle_pattern::{AngleStructure, CellComplex, Geometry, PatternProblem, RadiusAssignment};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Tanh–sinh quadrature of `f` over `[a, b]`.
///
/// The double-exponential change of variables `x = tanh((π/2)·sinh t)`
/// clusters nodes so hard toward the endpoints that integrable endpoint
/// singularities (logarithms included) converge to near machine precision
/// at moderate node counts — which is what makes it a fair independent
/// oracle for the closed forms under test.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let h = 1.0 / 128.0;
    let k_max = (4.3 / h) as i64;
    let mut sum = 0.0;
    for k in -k_max..=k_max {
        let t = k as f64 * h;
        let u = FRAC_PI_2 * t.sinh();
        let x = u.tanh();
        let node = mid + half * x;
        // Beyond |u| ≈ 19 the node rounds onto an endpoint; for an
        // integrable singularity the dropped tail is far below 1e-12.
        if node <= a.min(b) || node >= a.max(b) {
            continue;
        }
        let w = FRAC_PI_2 * t.cosh() / (u.cosh() * u.cosh());
        sum += w * f(node);
    }
    sum * h * half
}

/// Central difference `df/dx` at `x`.
pub fn central_diff(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// The three desk-scale benchmark complexes.
pub fn benchmark_complexes() -> Vec<(&'static str, CellComplex)> {
    vec![
        ("torus_2x2", torus_grid(2, 2)),
        ("torus_4x4", torus_grid(4, 4)),
        ("octagon", genus_two_octagon()),
    ]
}

/// Random intersection angles, kept away from the ends of `(0, π)` so the
/// sampled instances stay numerically ordinary.
pub fn random_intersection_angles(
    rng: &mut ChaCha8Rng,
    complex: &CellComplex,
) -> BTreeMap<String, f64> {
    complex
        .edges
        .iter()
        .map(|e| (e.id.clone(), rng.gen_range(0.2..0.8) * PI))
        .collect()
}

/// Random radii in the benchmark range: `[0.1, 2]` for hyperbolic patterns,
/// a point of the unit simplex (radii summing to one) for Euclidean ones.
pub fn random_radii(
    rng: &mut ChaCha8Rng,
    complex: &CellComplex,
    geometry: Geometry,
) -> RadiusAssignment {
    let raw: BTreeMap<String, f64> = complex
        .faces
        .iter()
        .map(|f| (f.id.clone(), rng.gen_range(0.1..=2.0)))
        .collect();
    let radii = match geometry {
        Geometry::Hyperbolic => raw,
        Geometry::Euclidean => {
            let total: f64 = raw.values().sum();
            raw.into_iter().map(|(id, r)| (id, r / total)).collect()
        }
    };
    RadiusAssignment::new(radii).expect("sampled radii are positive")
}

/// An instance that is exactly solvable by construction: random
/// intersection angles, random radii, and cone targets read off the
/// forward map at those radii. Returns the instance with the radii that
/// realize it.
pub fn exactly_solvable(
    rng: &mut ChaCha8Rng,
    complex: &CellComplex,
    geometry: Geometry,
) -> (PatternProblem, RadiusAssignment) {
    let d = random_intersection_angles(rng, complex);
    let radii = random_radii(rng, complex, geometry);
    let placeholder: BTreeMap<String, f64> =
        complex.faces.iter().map(|f| (f.id.clone(), 1.0)).collect();
    let scaffold = PatternProblem::new(complex.clone(), geometry, d.clone(), placeholder)
        .expect("sampled instance is valid");
    let cones = scaffold.forward_map(&radii).expect("radii in range").cones;
    let problem = PatternProblem::new(complex.clone(), geometry, d, cones)
        .expect("realized cone targets are positive");
    (problem, radii)
}

/// Rewrite one random face's cone target to twice the total intersection
/// angle on its edges plus a positive excess, which makes the singleton
/// subset slack negative — a guaranteed infeasibility witness.
pub fn overload_one_face(rng: &mut ChaCha8Rng, problem: &PatternProblem) -> PatternProblem {
    let complex = problem.complex().clone();
    let victim = complex.faces[rng.gen_range(0..complex.faces.len())]
        .id
        .clone();
    let budget: f64 = complex
        .edges
        .iter()
        .filter(|e| e.side_a == victim || e.side_b == victim)
        .map(|e| problem.intersection_angle(&e.id).unwrap())
        .sum();
    let mut phi = problem.cone_targets().clone();
    phi.insert(victim, 2.0 * budget + rng.gen_range(0.1..2.0));
    PatternProblem::new(
        complex,
        problem.geometry(),
        problem.intersection_angles().clone(),
        phi,
    )
    .expect("overloaded instance is still well-formed")
}

/// Scale every cone target by a factor near one: a hard case that may land
/// on either side of feasibility.
pub fn rescale_cones(rng: &mut ChaCha8Rng, problem: &PatternProblem) -> PatternProblem {
    let factor = rng.gen_range(0.9..1.2);
    let phi = problem
        .cone_targets()
        .iter()
        .map(|(id, &v)| (id.clone(), factor * v))
        .collect();
    PatternProblem::new(
        problem.complex().clone(),
        problem.geometry(),
        problem.intersection_angles().clone(),
        phi,
    )
    .expect("rescaled instance is still well-formed")
}

/// A random point of the open coherent-angle polytope (side angles
/// positive, pair sums below the intersection angles, face sums pinned to
/// `Φ/2`), reached from an interior base point by a random face-sum
/// preserving step of random admissible length.
pub fn random_interior_structure(
    rng: &mut ChaCha8Rng,
    problem: &PatternProblem,
    base: &AngleStructure,
) -> AngleStructure {
    let complex = problem.complex();
    loop {
        // Raw direction, then projection to zero mean over each face's
        // incident sides, which preserves every face-sum constraint.
        let mut z: BTreeMap<String, (f64, f64)> = complex
            .edges
            .iter()
            .map(|e| {
                (
                    e.id.clone(),
                    (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                )
            })
            .collect();
        let mut sums: BTreeMap<&str, (f64, f64)> = BTreeMap::new();
        for e in &complex.edges {
            let &(z0, z1) = z.get(&e.id).unwrap();
            let a = sums.entry(e.side_a.as_str()).or_insert((0.0, 0.0));
            a.0 += z0;
            a.1 += 1.0;
            let b = sums.entry(e.side_b.as_str()).or_insert((0.0, 0.0));
            b.0 += z1;
            b.1 += 1.0;
        }
        let mean: BTreeMap<&str, f64> = sums.iter().map(|(&f, &(s, n))| (f, s / n)).collect();
        for e in &complex.edges {
            let entry = z.get_mut(&e.id).unwrap();
            entry.0 -= mean[e.side_a.as_str()];
            entry.1 -= mean[e.side_b.as_str()];
        }

        // Longest step that keeps every side positive and every pair sum
        // strictly below its intersection angle.
        let mut lambda_max = f64::INFINITY;
        for e in &complex.edges {
            let (x0, x1) = (base.side(&e.id, 0).unwrap(), base.side(&e.id, 1).unwrap());
            let &(z0, z1) = z.get(&e.id).unwrap();
            if z0 < 0.0 {
                lambda_max = lambda_max.min(x0 / -z0);
            }
            if z1 < 0.0 {
                lambda_max = lambda_max.min(x1 / -z1);
            }
            let d = problem.intersection_angle(&e.id).unwrap();
            if z0 + z1 > 0.0 {
                lambda_max = lambda_max.min((d - x0 - x1) / (z0 + z1));
            }
        }
        if !(lambda_max.is_finite() && lambda_max > 1e-12) {
            continue; // direction collapsed under projection; resample
        }
        let step = rng.gen_range(0.05..0.85) * lambda_max;
        let sides = complex
            .edges
            .iter()
            .map(|e| {
                let (x0, x1) = (base.side(&e.id, 0).unwrap(), base.side(&e.id, 1).unwrap());
                let &(z0, z1) = z.get(&e.id).unwrap();
                (e.id.clone(), (x0 + step * z0, x1 + step * z1))
            })
            .collect();
        return AngleStructure::new(sides);
    }
}
