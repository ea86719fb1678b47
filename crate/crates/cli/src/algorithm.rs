//! The algorithm table behind `run`, `verify` and `bench`.

use clap::ValueEnum;
use lrmr_algos::{
    approx_b_matching, approx_max_matching, approx_sc_f, approx_sc_ln_delta, edge_colouring, maximal_clique, mis_fast,
    mis_simple, vertex_colouring, vertex_cover_2approx, AlgoError, ColourOptions, Outcome, ScOptions,
};
use lrmr_core::oracles::brute_force::{max_weight_b_matching, max_weight_matching, min_set_cover};
use lrmr_core::validate::{
    validate_clique, validate_colouring, validate_cover, validate_independent_set, validate_matching, Verdict,
};
use lrmr_core::{harmonic, io, Colouring, CoreError, Cover, Matching, Rational, SetCoverInstance, VertexSet, Weight};
use lrmr_engine::ClusterParams;

use crate::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    #[value(name = "sc-f")]
    ScF,
    #[value(name = "vc-2")]
    Vc2,
    #[value(name = "match-2")]
    Match2,
    #[value(name = "bmatch")]
    BMatch,
    #[value(name = "mis-simple")]
    MisSimple,
    #[value(name = "mis-fast")]
    MisFast,
    #[value(name = "clique")]
    Clique,
    #[value(name = "sc-lnD")]
    ScLnDelta,
    #[value(name = "colour-v")]
    ColourV,
    #[value(name = "colour-e")]
    ColourE,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
    /// Validity is the whole guarantee.
    Feasibility,
}

pub const ALL: [Algorithm; 10] = [
    Algorithm::ScF,
    Algorithm::Vc2,
    Algorithm::Match2,
    Algorithm::BMatch,
    Algorithm::MisSimple,
    Algorithm::MisFast,
    Algorithm::Clique,
    Algorithm::ScLnDelta,
    Algorithm::ColourV,
    Algorithm::ColourE,
];

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::ScF => "sc-f",
            Algorithm::Vc2 => "vc-2",
            Algorithm::Match2 => "match-2",
            Algorithm::BMatch => "bmatch",
            Algorithm::MisSimple => "mis-simple",
            Algorithm::MisFast => "mis-fast",
            Algorithm::Clique => "clique",
            Algorithm::ScLnDelta => "sc-lnD",
            Algorithm::ColourV => "colour-v",
            Algorithm::ColourE => "colour-e",
        }
    }

    pub fn operation(self) -> &'static str {
        match self {
            Algorithm::ScF => "approx_sc_f",
            Algorithm::Vc2 => "vertex_cover_2approx",
            Algorithm::Match2 => "approx_max_matching",
            Algorithm::BMatch => "approx_b_matching",
            Algorithm::MisSimple => "mis_simple",
            Algorithm::MisFast => "mis_fast",
            Algorithm::Clique => "maximal_clique",
            Algorithm::ScLnDelta => "approx_sc_ln_delta",
            Algorithm::ColourV => "vertex_colouring",
            Algorithm::ColourE => "edge_colouring",
        }
    }

    pub fn bound(self) -> &'static str {
        match self {
            Algorithm::ScF => "w(C) <= f * OPT, O((c/mu)^2) rounds",
            Algorithm::Vc2 => "w(C) <= 2 * OPT, O(c/mu) rounds",
            Algorithm::Match2 => "w(M) >= OPT / 2, O(c/mu) rounds",
            Algorithm::BMatch => "w(M) * (3 - 2/max(2,b) + 2eps) >= OPT",
            Algorithm::MisSimple => "maximal independent set, O(1/mu^2) rounds",
            Algorithm::MisFast => "maximal independent set, O(c/mu) rounds",
            Algorithm::Clique => "maximal clique, O(1/mu) rounds",
            Algorithm::ScLnDelta => "w(C) <= (1+eps) H_Delta * OPT, O(log(w_max/w_min * Delta)/(mu^2 eps)) rounds",
            Algorithm::ColourV => "(1 + o(1)) Delta vertex colours, O(1) rounds",
            Algorithm::ColourE => "(1 + o(1)) Delta edge colours, O(1) rounds",
        }
    }

    pub fn takes_set_cover(self) -> bool {
        matches!(self, Algorithm::ScF | Algorithm::ScLnDelta)
    }

    pub fn needs_epsilon(self) -> bool {
        matches!(self, Algorithm::BMatch | Algorithm::ScLnDelta)
    }

    pub fn needs_b(self) -> bool {
        self == Algorithm::BMatch
    }

    pub fn colours(self) -> bool {
        matches!(self, Algorithm::ColourV | Algorithm::ColourE)
    }

    pub fn sense(self) -> Sense {
        match self {
            Algorithm::Match2 | Algorithm::BMatch => Sense::Max,
            Algorithm::ScF | Algorithm::Vc2 | Algorithm::ScLnDelta => Sense::Min,
            _ => Sense::Feasibility,
        }
    }
}

/// A parsed instance file.
pub enum Instance {
    Graph(Graph),
    SetCover(SetCoverInstance<Rational>),
}

impl Instance {
    pub fn load(algorithm: Algorithm, text: &str) -> Result<Self, CoreError> {
        if algorithm.takes_set_cover() {
            io::parse_set_cover(text).map(Instance::SetCover)
        } else {
            io::parse_graph(text).map(Instance::Graph)
        }
    }

    /// Digest of the canonical rendering, so formatting noise does not matter.
    pub fn digest(&self) -> String {
        match self {
            Instance::Graph(g) => io::digest(&io::write_graph(g)),
            Instance::SetCover(inst) => io::digest(&io::write_set_cover(inst)),
        }
    }

    fn graph(&self) -> &Graph {
        match self {
            Instance::Graph(g) => g,
            Instance::SetCover(_) => unreachable!("algorithm expects a graph"),
        }
    }

    fn set_cover(&self) -> &SetCoverInstance<Rational> {
        match self {
            Instance::SetCover(inst) => inst,
            Instance::Graph(_) => unreachable!("algorithm expects a set cover instance"),
        }
    }

    /// Vertex covers are scored with unit vertex weights.
    fn vertex_cover(&self) -> Result<SetCoverInstance<Rational>, CoreError> {
        let g = self.graph();
        SetCoverInstance::from_vertex_cover(g, vec![Rational::from_count(1); g.n()])
    }
}

#[derive(Debug, Clone, Default)]
pub struct Knobs {
    pub epsilon: Option<Rational>,
    pub b: Option<usize>,
    pub kappa: Option<usize>,
    pub group_cap: Option<usize>,
}

impl Knobs {
    fn epsilon(&self) -> Rational {
        self.epsilon.clone().expect("epsilon checked before dispatch")
    }

    fn capacities(&self, n: usize) -> Vec<usize> {
        vec![self.b.expect("b checked before dispatch"); n]
    }

    fn colour_options(&self) -> ColourOptions {
        let mut opts = ColourOptions { kappa: self.kappa, ..Default::default() };
        if let Some(cap) = self.group_cap {
            opts.group_cap = cap;
        }
        opts
    }
}

#[derive(Debug, Clone)]
pub enum Solution {
    Matching(Matching),
    Cover(Cover),
    Vertices(VertexSet),
    Colouring(Colouring),
}

impl Solution {
    pub fn from_file(file: io::SolutionFile) -> Solution {
        match file {
            // ids may be out of range; validation recomputes loads
            io::SolutionFile::Matching(edges) => Solution::Matching(Matching { edges, load: Vec::new() }),
            io::SolutionFile::Cover(c) => Solution::Cover(c),
            io::SolutionFile::Vertices(v) => Solution::Vertices(v),
            io::SolutionFile::Colouring(c) => Solution::Colouring(c),
        }
    }

    pub fn render(&self) -> String {
        match self {
            Solution::Matching(m) => io::write_matching(m),
            Solution::Cover(c) => io::write_cover(c),
            Solution::Vertices(v) => io::write_vertices(v),
            Solution::Colouring(c) => io::write_colouring(c),
        }
    }
}

pub fn run(
    algorithm: Algorithm,
    instance: &Instance,
    params: &ClusterParams,
    knobs: &Knobs,
) -> Result<Outcome<Solution>, AlgoError> {
    fn wrap<T>(out: Outcome<T>, f: impl FnOnce(T) -> Solution) -> Outcome<Solution> {
        Outcome { solution: f(out.solution), trace: out.trace, iterations: out.iterations }
    }
    Ok(match algorithm {
        Algorithm::ScF => wrap(approx_sc_f(instance.set_cover(), params, &ScOptions::default())?, Solution::Cover),
        Algorithm::Vc2 => {
            let g = instance.graph();
            wrap(vertex_cover_2approx(g, vec![Rational::from_count(1); g.n()], params)?, Solution::Cover)
        }
        Algorithm::Match2 => wrap(approx_max_matching(instance.graph(), params)?, Solution::Matching),
        Algorithm::BMatch => {
            let g = instance.graph();
            wrap(approx_b_matching(g, &knobs.capacities(g.n()), knobs.epsilon(), params)?, Solution::Matching)
        }
        Algorithm::MisSimple => wrap(mis_simple(instance.graph(), params)?, Solution::Vertices),
        Algorithm::MisFast => wrap(mis_fast(instance.graph(), params)?, Solution::Vertices),
        Algorithm::Clique => wrap(maximal_clique(instance.graph(), params)?, Solution::Vertices),
        Algorithm::ScLnDelta => {
            wrap(approx_sc_ln_delta(instance.set_cover(), &knobs.epsilon(), params)?, Solution::Cover)
        }
        Algorithm::ColourV => {
            wrap(vertex_colouring(instance.graph(), params, &knobs.colour_options())?, Solution::Colouring)
        }
        Algorithm::ColourE => {
            wrap(edge_colouring(instance.graph(), params, &knobs.colour_options())?, Solution::Colouring)
        }
    })
}

/// Validity verdict and objective (weight, size or colour count).
pub fn check(
    algorithm: Algorithm,
    instance: &Instance,
    solution: &Solution,
    knobs: &Knobs,
) -> (Verdict, Option<Rational>) {
    let count = |k: usize| Rational::from_count(k);
    let report = match (algorithm, solution) {
        (Algorithm::Match2, Solution::Matching(m)) => validate_matching(instance.graph(), &m.edges, None),
        (Algorithm::BMatch, Solution::Matching(m)) => {
            let g = instance.graph();
            validate_matching(g, &m.edges, Some(&knobs.capacities(g.n())))
        }
        (Algorithm::ScF | Algorithm::ScLnDelta, Solution::Cover(c)) => validate_cover(instance.set_cover(), c),
        (Algorithm::Vc2, Solution::Cover(c)) => match instance.vertex_cover() {
            Ok(inst) => validate_cover(&inst, c),
            Err(e) => return (Verdict::Malformed(e.to_string()), None),
        },
        (Algorithm::MisSimple | Algorithm::MisFast, Solution::Vertices(s)) => {
            validate_independent_set(instance.graph(), s)
        }
        (Algorithm::Clique, Solution::Vertices(s)) => validate_clique(instance.graph(), s),
        (Algorithm::ColourV | Algorithm::ColourE, Solution::Colouring(c)) => {
            let expected = if algorithm == Algorithm::ColourV { "vertex" } else { "edge" };
            if c.kind.to_string() != expected {
                return (Verdict::Malformed(format!("expected a {expected} colouring")), None);
            }
            validate_colouring(instance.graph(), c)
        }
        _ => return (Verdict::Malformed(format!("solution kind does not fit {}", algorithm.name())), None),
    };
    let objective = report.objective.map(|o| match o {
        lrmr_core::Objective::Weight(w) => w,
        lrmr_core::Objective::Size(k) | lrmr_core::Objective::Colours(k) => count(k),
    });
    (report.verdict, objective)
}

/// Exact optimum by exhaustive search; `None` when there is no exact oracle
/// for the problem.
pub fn oracle(algorithm: Algorithm, instance: &Instance, knobs: &Knobs) -> Option<Result<Rational, CoreError>> {
    match algorithm {
        Algorithm::Match2 => Some(max_weight_matching(instance.graph()).map(|(w, _)| w)),
        Algorithm::BMatch => {
            let g = instance.graph();
            Some(max_weight_b_matching(g, &knobs.capacities(g.n())).map(|(w, _)| w))
        }
        Algorithm::ScF | Algorithm::ScLnDelta => Some(min_set_cover(instance.set_cover()).map(|(w, _)| w)),
        Algorithm::Vc2 => Some(instance.vertex_cover().and_then(|inst| min_set_cover(&inst).map(|(w, _)| w))),
        _ => None,
    }
}

/// The guaranteed approximation factor, as a number `>= 1`.
pub fn factor(algorithm: Algorithm, instance: &Instance, knobs: &Knobs) -> Option<Rational> {
    let two = Rational::from_count(2);
    match algorithm {
        Algorithm::Match2 | Algorithm::Vc2 => Some(two),
        Algorithm::ScF => Some(Rational::from_count(instance.set_cover().frequency().max(1))),
        Algorithm::BMatch => {
            let b = Rational::from_count(knobs.b.unwrap_or(1).max(2));
            Some(Rational::from_count(3) - two.clone() / b + two * knobs.epsilon())
        }
        Algorithm::ScLnDelta => {
            let delta = instance.set_cover().max_set_size();
            Some((Rational::from_count(1) + knobs.epsilon()) * harmonic::<Rational>(delta))
        }
        _ => None,
    }
}

/// Approximation ratio as a number `>= 1`: `OPT/ALG` when maximizing,
/// `ALG/OPT` when minimizing. `None` stands for an unbounded ratio.
pub fn ratio(sense: Sense, objective: &Rational, optimum: &Rational) -> Option<Rational> {
    let (num, den) = match sense {
        Sense::Max => (optimum, objective),
        Sense::Min | Sense::Feasibility => (objective, optimum),
    };
    if *den == Rational::from_count(0) {
        return (*num == Rational::from_count(0)).then(|| Rational::from_count(1));
    }
    Some(num.clone() / den.clone())
}
