use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{CliError, Command, Report, RunConfig};
use crate::cohomology::{differential_squares, div_factorization_check, h_cg_dimensions, tree_h0, CohomologyError};
use crate::graph::{enumerate_internally_connected, GraphError};
use crate::kforms::{at_associator, flatness_residual, Configuration, FormError, McConfig, McEstimate, Tangent};
use crate::lie::assoc::solve_weight_two_hexagons;
use crate::lie::sder::{embedding_matrix, sder_dimension};
use crate::lie::tn::tn_dimension;
use crate::linalg::Rational;
use crate::transport::{
    aw_map, check_decomposition, diagonal_boundary, k_boundary_check, monoidal_aw_check, normalize_bigraded,
    psi_boundary_check, random_diagonal_chain, shuffle_map, t_simplicial_check, total_boundary, BiChain, LinComb,
    PolyConnection, SimplicialSet, TransportError,
};

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::ResourceLimit { .. } => Self::Resource(e.to_string()),
            e => Self::Compute(e.to_string()),
        }
    }
}

impl From<CohomologyError> for CliError {
    fn from(e: CohomologyError) -> Self {
        match e {
            CohomologyError::Graph(g) => g.into(),
            e => Self::Compute(e.to_string()),
        }
    }
}

impl From<FormError> for CliError {
    fn from(e: FormError) -> Self {
        Self::Compute(e.to_string())
    }
}

impl From<TransportError> for CliError {
    fn from(e: TransportError) -> Self {
        Self::Compute(e.to_string())
    }
}

pub(super) fn dispatch(c: &RunConfig, r: &mut Report) -> Result<(), CliError> {
    match c.command {
        Command::Enumerate => enumerate(c, r),
        Command::Cohomology => cohomology(c, r),
        Command::Sder => sder(c, r),
        Command::DivCheck => div_check(c, r),
        Command::Associator => associator(c, r),
        Command::Flatness => flatness(c, r),
        Command::AwTest => aw_test(c, r),
        Command::TransportTest => transport_test(c, r),
        Command::Report => everything(c, r),
    }
}

fn enumerate(c: &RunConfig, r: &mut Report) -> Result<(), CliError> {
    let mut blocks = Vec::new();
    let mut total = 0;
    let outcome = (|| {
        for w in c.weights() {
            let graphs = enumerate_internally_connected(c.n, w, c.limits())?;
            let mut by_degree: BTreeMap<i64, usize> = BTreeMap::new();
            for g in &graphs {
                *by_degree.entry(g.grading().cg_degree).or_default() += 1;
            }
            total += graphs.len();
            let squares = differential_squares(c.n, w, c.limits())?;
            r.check(format!("w={w}: d^2 = 0"), squares.passed(), &squares);
            blocks.push(json!({ "weight": w, "count": graphs.len(), "by_degree": by_degree }));
        }
        Ok::<_, CliError>(())
    })();
    r.result("count", total);
    r.result("blocks", &blocks);
    outcome
}

fn cohomology(c: &RunConfig, r: &mut Report) -> Result<(), CliError> {
    let mut table = Vec::new();
    let outcome = (|| {
        for w in c.weights() {
            let dims = h_cg_dimensions(c.n, w, c.limits())?;
            let expected = tn_dimension(c.n, w);
            let degree_zero = dims.get(&0).copied().unwrap_or(0);
            let stray: BTreeMap<i64, usize> = dims
                .iter()
                .filter(|(d, v)| **d != 0 && **v > 0)
                .map(|(d, v)| (*d, *v))
                .collect();
            r.check(
                format!("w={w}: dim H^0 = dim t_n"),
                degree_zero == expected,
                json!({ "found": degree_zero, "expected": expected }),
            );
            r.check(
                format!("w={w}: H^d = 0 for d != 0"),
                stray.is_empty(),
                json!({ "nonzero": stray }),
            );
            table.push(json!({ "weight": w, "dims": dims, "tn_dimension": expected }));
        }
        Ok::<_, CliError>(())
    })();
    r.result("n", c.n);
    r.result("table", &table);
    outcome
}

fn sder(c: &RunConfig, r: &mut Report) -> Result<(), CliError> {
    let mut table = Vec::new();
    let outcome = (|| {
        for w in c.weights() {
            let trees = tree_h0(c.n, w, c.limits())?;
            let sder = sder_dimension(c.n, w);
            let tn = tn_dimension(c.n, w);
            let rank = embedding_matrix(c.n, w).rank();
            r.check(
                format!("w={w}: trees mod IHX = sder"),
                trees.dim == sder,
                json!({ "trees": trees.dim, "sder": sder }),
            );
            r.check(
                format!("w={w}: t_n -> sder injective"),
                rank == tn,
                json!({ "rank": rank, "tn": tn }),
            );
            table.push(json!({
                "weight": w,
                "trivalent_trees": trees.trivalent_trees,
                "ihx_rank": trees.ihx_rank,
                "tree_h0": trees.dim,
                "sder_dimension": sder,
                "tn_dimension": tn,
                "embedding_rank": rank,
            }));
        }
        Ok::<_, CliError>(())
    })();
    r.result("n", c.n);
    r.result("table", &table);
    outcome
}

fn div_check(c: &RunConfig, r: &mut Report) -> Result<(), CliError> {
    let mut rows = Vec::new();
    let outcome = (|| {
        for w in c.weights() {
            let d = div_factorization_check(c.n, w, c.limits())?;
            r.check(format!("w={w}: trace well defined"), d.trace_well_defined, json!({}));
            r.check(format!("w={w}: trace d1 = ±div"), d.consistent, &d);
            rows.push(d);
        }
        Ok::<_, CliError>(())
    })();
    let nontrivial: usize = rows.iter().map(|d| d.nontrivial).sum();
    let mut signs: Vec<i8> = rows.iter().filter_map(|d| d.sign).collect();
    signs.dedup();
    r.check(
        "at least 5 nontrivial classes",
        nontrivial >= 5,
        json!({ "nontrivial": nontrivial }),
    );
    r.check("one global sign", signs.len() == 1, json!({ "signs": signs }));
    r.result("sign", signs.first());
    r.result("weights", &rows);
    outcome
}

fn estimate_json(e: &McEstimate) -> serde_json::Value {
    json!({ "value": e.value, "stderr": e.stderr, "samples": e.samples })
}

fn associator(c: &RunConfig, r: &mut Report) -> Result<(), CliError> {
    let est = at_associator(c.nodes, &McConfig::new(c.samples, c.seed()))?;
    let exact = solve_weight_two_hexagons().ok_or_else(|| CliError::Compute("hexagons have no solution".into()))?;
    r.result(
        "weight_one",
        est.weight_one.iter().map(estimate_json).collect::<Vec<_>>(),
    );
    r.result("coefficient", estimate_json(&est.coefficient));
    r.result("coarse", estimate_json(&est.coarse));
    r.result("hexagon_solution", exact.to_string());
    r.result("orientation", est.orientation());
    r.result("hexagon_residual", est.hexagon_residual);
    r.result("inverse_hexagon_residual", est.inverse_hexagon_residual);
    r.result("lie_residual", est.lie_residual);
    r.result("quadrature_gap", est.quadrature_gap());
    let zero = est.weight_one.iter().all(|e| e.value == 0.0);
    r.check(
        "weight-one part vanishes",
        zero,
        json!({ "values": est.weight_one.iter().map(|e| e.value).collect::<Vec<_>>() }),
    );
    let gap = (est.coefficient.value.abs() - est.hexagon_solution.abs()).abs();
    r.check(
        "|c| matches the hexagon solution",
        gap < 5e-3,
        json!({ "gap": gap, "tolerance": 5e-3, "stderr": est.coefficient.stderr }),
    );
    let residual = est.best_hexagon_residual();
    r.check(
        "hexagon residual",
        residual < 1e-2,
        json!({ "residual": residual, "tolerance": 1e-2, "orientation": est.orientation() }),
    );
    Ok(())
}

fn flatness(c: &RunConfig, r: &mut Report) -> Result<(), CliError> {
    if c.n < 2 {
        return Err(CliError::Usage("flatness needs --n of at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed());
    let mc = McConfig::new(c.samples, c.seed());
    let mut rows = Vec::new();
    for i in 0..c.configs {
        let config = Configuration::random(c.n, 0.2, &mut rng);
        let (a, b) = (rng.gen_range(1..c.n), rng.gen_range(0..c.n));
        let x = Tangent::coordinate(c.n, a, 0);
        let y = Tangent::coordinate(c.n, b, 1);
        let h = 1e-4 * config.radius();
        let report = flatness_residual(&config, &x, &y, h, &mc.reseeded(i as u64))?;
        r.check(
            format!("configuration {i}: residual within 3x budget"),
            report.passed(3.0, 5e-2),
            json!({ "max_residual": report.max_residual, "error_budget": report.error_budget }),
        );
        rows.push(json!({ "configuration": config, "report": report }));
    }
    r.result("configurations", &rows);
    Ok(())
}

fn random_bichain(x: &SimplicialSet, y: &SimplicialSet, p: usize, q: usize, rng: &mut ChaCha8Rng) -> BiChain {
    let mut c = LinComb::zero();
    for _ in 0..3 {
        let s = (x.random_simplex(p, rng), y.random_simplex(q, rng));
        c.add(s, Rational::from_integer(rng.gen_range(-2i64..=2).into()));
    }
    c
}

fn aw_test(c: &RunConfig, r: &mut Report) -> Result<(), CliError> {
    let mut tables = Vec::new();
    for m in 0..=3 {
        for n in 0..=3 {
            let d = check_decomposition(m, n);
            r.check(format!("shuffle lemma ({m}, {n})"), d.passed(), &d);
            tables.push(json!({ "m": m, "n": n, "shuffles": d.shuffles, "cuts": d.cuts }));
        }
    }
    r.result("shuffle_lemma", &tables);
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed());
    let (mut chain_maps, mut inverse, mut monoidal, mut nonzero) = (0, 0, 0, 0);
    let mut failures = Vec::new();
    for trial in 0..8 {
        let x = SimplicialSet::random(2, 4, &mut rng);
        let y = SimplicialSet::random(1, 4, &mut rng);
        for level in 0..=3 {
            let a = random_diagonal_chain(&x, &y, level, 3, &mut rng);
            chain_maps += 1;
            if aw_map(&diagonal_boundary(&a))? != total_boundary(&aw_map(&a)?) {
                failures.push(json!({ "trial": trial, "level": level, "map": "aw" }));
            }
            for p in 0..=level {
                let b = normalize_bigraded(&random_bichain(&x, &y, p, level - p, &mut rng));
                inverse += 1;
                if normalize_bigraded(&aw_map(&shuffle_map(&b)?)?) != b {
                    failures.push(json!({ "trial": trial, "bidegree": [p, level - p], "map": "aw∘sh" }));
                }
                if shuffle_map(&total_boundary(&b))? != diagonal_boundary(&shuffle_map(&b)?) {
                    failures.push(json!({ "trial": trial, "bidegree": [p, level - p], "map": "sh" }));
                }
            }
        }
        let x2 = SimplicialSet::random(1, 3, &mut rng);
        let y2 = SimplicialSet::random(1, 3, &mut rng);
        for m in 0..=2 {
            for n in 0..=(3 - m).min(2) {
                let a = random_diagonal_chain(&x, &y, m, 2, &mut rng);
                let b = random_diagonal_chain(&x2, &y2, n, 2, &mut rng);
                let check = monoidal_aw_check(&a, &b)?;
                monoidal += 1;
                nonzero += usize::from(!check.left.is_zero());
                if !check.passed() {
                    failures.push(json!({ "trial": trial, "levels": [m, n], "map": "monoidal" }));
                }
            }
        }
    }
    r.check(
        "AW and sh are chain maps, AW∘sh = id, monoidal identity",
        failures.is_empty(),
        json!({ "failures": failures }),
    );
    r.check(
        "monoidal identity is not vacuous",
        nonzero > 0,
        json!({ "nonzero_cases": nonzero }),
    );
    r.result(
        "random_checks",
        json!({ "chain_maps": chain_maps, "aw_after_shuffle": inverse, "monoidal": monoidal, "monoidal_nonzero": nonzero }),
    );
    Ok(())
}

fn transport_test(c: &RunConfig, r: &mut Report) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed());
    let mut rows = Vec::new();
    for dim in 0..=2 {
        for family in 0..2 {
            let a = PolyConnection::random_gauge(dim, 0, 2, c.trunc, &mut rng)?;
            let k = k_boundary_check(&a)?;
            r.check(
                format!("simplex {dim}, family {family}: K(dA) = b K(A)"),
                k.passed(),
                &k,
            );
            let t = t_simplicial_check(&a)?;
            r.check(
                format!("simplex {dim}, family {family}: T is simplicial"),
                t.passed(),
                &t,
            );
            let b = PolyConnection::random_gauge(dim, 1, 2, c.trunc, &mut rng)?;
            let psi = psi_boundary_check(&b)?;
            let vacuous = dim > 0 && psi.rhs.is_zero();
            r.check(
                format!("simplex {dim}, family {family}: Psi boundary identity"),
                psi.passed() && !vacuous,
                json!({
                    "holonomy_failures": psi.holonomy_failures,
                    "lhs_terms": psi.lhs.len(),
                    "rhs_terms": psi.rhs.len(),
                    "vacuous": vacuous,
                }),
            );
            rows.push(json!({
                "simplex_dim": dim,
                "family": family,
                "k_image_terms": k.image_terms,
                "psi_terms": psi.rhs.len(),
            }));
        }
    }
    r.result("families", &rows);
    Ok(())
}

fn everything(c: &RunConfig, r: &mut Report) -> Result<(), CliError> {
    let parts = [
        Command::Enumerate,
        Command::Cohomology,
        Command::Sder,
        Command::DivCheck,
        Command::AwTest,
        Command::TransportTest,
        Command::Associator,
        Command::Flatness,
    ];
    for command in parts {
        let sub_config = RunConfig { command, ..c.clone() };
        let mut sub = Report::new(&sub_config);
        let outcome = dispatch(&sub_config, &mut sub);
        r.result(command.name(), &sub.results);
        for check in sub.checks {
            r.check(format!("{}: {}", command.name(), check.name), check.pass, check.detail);
        }
        outcome?;
    }
    Ok(())
}
