//! Small built-in problems with known data.

use nalgebra::DMatrix;

use crate::linalg::SymMatrix;
use crate::lp::LpProblem;
use crate::sdp::SdpProblem;

#[derive(Debug, Clone)]
pub enum FixtureProblem {
    Lp(LpProblem),
    Sdp(SdpProblem),
}

#[derive(Debug, Clone, PartialEq)]
pub enum KnownSolution {
    Vector(Vec<f64>),
    Matrix(SymMatrix),
}

/// Two-parameter family of starting matrices.
pub type StartBuilder = fn(f64, f64) -> SymMatrix;

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub problem: FixtureProblem,
    pub known_optimum: Option<f64>,
    pub known_solution: Option<KnownSolution>,
    pub start_builder: Option<StartBuilder>,
}

pub fn fixtures() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "lp_example",
            description: "linear program in 5 variables, optimum at a vertex",
            problem: FixtureProblem::Lp(lp_example()),
            known_optimum: Some(-13.0),
            known_solution: Some(KnownSolution::Vector(vec![3.0, 5.0, 3.0, 0.0, 0.0])),
            start_builder: None,
        },
        Fixture {
            name: "sos_example",
            description: "Gram matrix SDP bounding a quartic polynomial from below",
            problem: FixtureProblem::Sdp(sos_example()),
            known_optimum: Some(1.0),
            known_solution: Some(KnownSolution::Matrix(sos_solution())),
            start_builder: Some(sos_start),
        },
        Fixture {
            name: "combinatorial_example",
            description: "relaxation of a 0-1 quadratic problem (objective is a demo choice)",
            problem: FixtureProblem::Sdp(combinatorial_example(None)),
            known_optimum: None,
            known_solution: None,
            start_builder: None,
        },
        Fixture {
            name: "pencil_example",
            description: "2x2 pencil [[1+x, y], [y, 1-x]], minimizing x over the disk",
            problem: FixtureProblem::Sdp(pencil_example()),
            known_optimum: Some(-1.0),
            known_solution: Some(KnownSolution::Matrix(SymMatrix::from_diagonal(&[0.0, 2.0]))),
            start_builder: Some(pencil_start),
        },
    ]
}

/// Looks a fixture up by full name or by its prefix before `_example`.
pub fn fixture(name: &str) -> Option<Fixture> {
    let name = name.to_ascii_lowercase();
    let name = name.as_str();
    let alias = match name {
        "lp" => "lp_example",
        "sos" => "sos_example",
        "cmb" | "comb" | "combinatorial" => "combinatorial_example",
        "pencil" => "pencil_example",
        other => other,
    };
    fixtures().into_iter().find(|f| f.name == alias)
}

pub fn fixture_names() -> Vec<&'static str> {
    fixtures().iter().map(|f| f.name).collect()
}

pub fn lp_example() -> LpProblem {
    let a = DMatrix::from_row_slice(
        3,
        5,
        &[
            -2.0, 1.0, 1.0, 0.0, 0.0, //
            -1.0, 2.0, 0.0, 1.0, 0.0, //
            1.0, 0.0, 0.0, 0.0, 1.0,
        ],
    );
    LpProblem::new(a, vec![2.0, 7.0, 3.0], vec![-1.0, -2.0, 0.0, 0.0, 0.0])
        .expect("fixture data is valid")
}

fn sym(n: usize, data: &[f64]) -> SymMatrix {
    SymMatrix::from_row_slice(n, data).expect("fixture data is symmetric")
}

/// Smallest `t` such that `x⁴ + 3.75x³ + 3.25x² + t` is a sum of squares,
/// posed over Gram matrices in the monomials `(1, x, x²)`.
pub fn sos_example() -> SdpProblem {
    let a1 = SymMatrix::unit_pair(3, 0, 1);
    let a2 = &SymMatrix::unit_pair(3, 0, 2) + &SymMatrix::from_diagonal(&[0.0, 1.0, 0.0]);
    let a3 = SymMatrix::unit_pair(3, 1, 2);
    let a4 = SymMatrix::from_diagonal(&[0.0, 0.0, 1.0]);
    SdpProblem::new(
        SymMatrix::from_diagonal(&[1.0, 0.0, 0.0]),
        vec![a1, a2, a3, a4],
        vec![0.0, 3.25, 3.75, 1.0],
    )
    .expect("fixture data is valid")
}

/// Feasible matrices of the SOS fixture: `ξ` moves along the freedom, `η` is the objective.
pub fn sos_start(xi: f64, eta: f64) -> SymMatrix {
    sym(
        3,
        &[
            eta,
            0.0,
            -xi / 2.0, //
            0.0,
            3.25 + xi,
            1.875, //
            -xi / 2.0,
            1.875,
            1.0,
        ],
    )
}

pub fn sos_solution() -> SymMatrix {
    sym(
        3,
        &[
            1.0, 0.0, -0.25, //
            0.0, 3.75, 1.875, //
            -0.25, 1.875, 1.0,
        ],
    )
}

/// Objective used when none is supplied for the combinatorial relaxation.
pub fn combinatorial_demo_objective() -> SymMatrix {
    sym(
        3,
        &[
            0.0, 0.25, -0.25, //
            0.25, 0.0, 0.0, //
            -0.25, 0.0, 0.0,
        ],
    )
}

/// Relaxation of `min f(x)` over `x ∈ {0, 1}²` with the lifted matrix
/// `[[1, xᵀ], [x, x xᵀ]]`; `x_i² = x_i` becomes the two linear constraints.
pub fn combinatorial_example(objective: Option<SymMatrix>) -> SdpProblem {
    let a0 = SymMatrix::from_diagonal(&[1.0, 0.0, 0.0]);
    let a1 = sym(3, &[0.0, -0.5, 0.0, -0.5, 1.0, 0.0, 0.0, 0.0, 0.0]);
    let a2 = sym(3, &[0.0, 0.0, -0.5, 0.0, 0.0, 0.0, -0.5, 0.0, 1.0]);
    SdpProblem::new(
        objective.unwrap_or_else(combinatorial_demo_objective),
        vec![a0, a1, a2],
        vec![1.0, 0.0, 0.0],
    )
    .expect("fixture data is valid")
}

/// `trace(X) = 2` makes every feasible `X` a point `[[1+x, y], [y, 1−x]]`;
/// the objective `diag(½, −½)` reads off `x`.
pub fn pencil_example() -> SdpProblem {
    SdpProblem::new(
        SymMatrix::from_diagonal(&[0.5, -0.5]),
        vec![SymMatrix::identity(2)],
        vec![2.0],
    )
    .expect("fixture data is valid")
}

pub fn pencil_start(x: f64, y: f64) -> SymMatrix {
    sym(2, &[1.0 + x, y, y, 1.0 - x])
}
