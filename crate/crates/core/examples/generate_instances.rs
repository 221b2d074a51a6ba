//! Regenerates the bundled instance files in `instances/`.
//!
//! `torus_2x2.json` is maintained by hand (it demonstrates the `deg`
//! angle syntax); everything else is emitted from the fixtures here.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;

use circle_pattern::fixtures::{genus_two_octagon, torus_grid, uniform_problem};
use circle_pattern::format::{emit_instance, Instance, Metadata};
use circle_pattern::{CellComplex, Geometry, PatternProblem};

fn meta(name: &str, description: &str) -> Metadata {
    Metadata {
        name: Some(name.into()),
        description: Some(description.into()),
    }
}

fn with_cones(
    complex: CellComplex,
    geometry: Geometry,
    d: f64,
    phi: &[(&str, f64)],
) -> PatternProblem {
    let d_map: BTreeMap<String, f64> = complex.edges.iter().map(|e| (e.id.clone(), d)).collect();
    let phi_map: BTreeMap<String, f64> = phi.iter().map(|&(id, v)| (id.to_string(), v)).collect();
    PatternProblem::new(complex, geometry, d_map, phi_map).expect("valid instance")
}

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances");
    std::fs::create_dir_all(&dir).expect("instances directory");
    let write = |name: &str, instance: &Instance| {
        let path = dir.join(name);
        std::fs::write(&path, emit_instance(instance)).expect("write instance");
        println!("wrote {}", path.display());
    };

    write(
        "torus_2x2_hyp.json",
        &Instance {
            problem: uniform_problem(
                torus_grid(2, 2),
                Geometry::Hyperbolic,
                FRAC_PI_2,
                2.0 * PI - 0.1,
            )
            .unwrap(),
            metadata: meta(
                "hyperbolic 2x2 torus",
                "Orthogonal intersections with a uniform cone deficit of 0.1; strictly feasible.",
            ),
        },
    );

    write(
        "torus_2x2_phi2pi_hyp.json",
        &Instance {
            problem: uniform_problem(torus_grid(2, 2), Geometry::Hyperbolic, FRAC_PI_2, 2.0 * PI)
                .unwrap(),
            metadata: meta(
                "hyperbolic 2x2 torus, flat targets",
                "Cone angles of exactly 2π make the full face set tight: infeasible in hyperbolic geometry.",
            ),
        },
    );

    write(
        "torus_3x3.json",
        &Instance {
            problem: uniform_problem(torus_grid(3, 3), Geometry::Euclidean, FRAC_PI_2, 2.0 * PI)
                .unwrap(),
            metadata: meta(
                "flat 3x3 torus",
                "Nine-face square grid torus; the flat solution has all radii equal.",
            ),
        },
    );

    write(
        "torus_4x4_hyp.json",
        &Instance {
            problem: uniform_problem(
                torus_grid(4, 4),
                Geometry::Hyperbolic,
                FRAC_PI_2,
                2.0 * PI - 0.05,
            )
            .unwrap(),
            metadata: meta(
                "hyperbolic 4x4 torus",
                "Sixteen faces with a small uniform cone deficit.",
            ),
        },
    );

    write(
        "genus2_octagon_hyp.json",
        &Instance {
            problem: uniform_problem(
                genus_two_octagon(),
                Geometry::Hyperbolic,
                FRAC_PI_2,
                2.0 * PI,
            )
            .unwrap(),
            metadata: meta(
                "genus-2 octagon",
                "One octagonal face with standard identifications; the regular solution has r = acosh(1 + sqrt 2).",
            ),
        },
    );

    write(
        "genus2_octagon_euc.json",
        &Instance {
            problem: uniform_problem(
                genus_two_octagon(),
                Geometry::Euclidean,
                FRAC_PI_2,
                4.0 * PI,
            )
            .unwrap(),
            metadata: meta(
                "genus-2 octagon, Euclidean",
                "The single self-glued face closes identically at cone angle 4π; any radius solves it.",
            ),
        },
    );

    write(
        "infeasible_singleton_hyp.json",
        &Instance {
            problem: with_cones(
                torus_grid(2, 2),
                Geometry::Hyperbolic,
                FRAC_PI_2,
                &[
                    ("f0_0", 4.0 * PI),
                    ("f0_1", 2.0 * PI),
                    ("f1_0", 2.0 * PI),
                    ("f1_1", 2.0 * PI),
                ],
            ),
            metadata: meta(
                "overloaded face",
                "One face demands cone angle 4π, twice its edge budget: infeasible.",
            ),
        },
    );

    write(
        "euclidean_mass_transfer.json",
        &Instance {
            problem: with_cones(
                torus_grid(2, 2),
                Geometry::Euclidean,
                FRAC_PI_2,
                &[
                    ("f0_0", 4.0 * PI),
                    ("f0_1", 4.0 * PI / 3.0),
                    ("f1_0", 4.0 * PI / 3.0),
                    ("f1_1", 4.0 * PI / 3.0),
                ],
            ),
            metadata: meta(
                "euclidean mass transfer",
                "Total cone angle balances, but one face absorbs exactly its edge budget: the singleton subset is tight.",
            ),
        },
    );
}
