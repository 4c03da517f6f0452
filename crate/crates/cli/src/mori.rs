//! `latpoly mori`: star triangulations, Stanley-Reisner ideals and Mori cones.


use latpoly::cws::polytope_from_cws;
use latpoly::hodge::hodge_numbers;
use latpoly::mori::{
    auto_star_triangulations, bits, facet_incidences, laurent_polynomial, mori_generators, relevant_points, sr_ideal,
    user_points, validate_triangulation, Simplex, Triangulation, MAX_FACET_POINTS,
};
use latpoly::polytope::{analyze, complete_points, dual};
use latpoly::simplices::ip_simplices;
use latpoly::{FacetSystem, LatticePolytope, Point};

use crate::input::{Record, RecordKind};
use crate::poly::take_long;
use crate::render::{columns, dashes, row};
use crate::{drive, fail, split_args, CliError, Common, Io, Job, Legacy, Streams};

pub const HELP: &str = "\
Option strings (concatenate letters, e.g. -fgm):
  h  this information            f  use as filter (no prompts)
  g  triangulations and Stanley-Reisner ideals (default)
  I  incidences of the facets (ignoring facet interior points)
  m  Mori generators of the ambient space
  P  IP simplices among the relevant points of P*
  K  points of P* as a Laurent polynomial, facet interior points and Picard number
  D  input is a point matrix of P* (default: weights)
  M  triangulations are read from the input after the polytope (not with K)
Long options: --non-regular also reports triangulations without a strictly convex support function.
Not available: b i c t d a H (these need intersection ring computations).
";

#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub filter: bool,
    pub general: bool,
    pub incidence: bool,
    pub mori: bool,
    pub ip: bool,
    pub laurent: bool,
    pub dual_input: bool,
    pub manual: bool,
}

pub fn parse_flags(opts: &[String]) -> Result<Option<Flags>, CliError> {
    let mut f = Flags::default();
    for o in opts {
        for c in o.chars().skip(1) {
            match c {
                'h' => return Ok(None),
                'f' => f.filter = true,
                'g' => f.general = true,
                'I' => f.incidence = true,
                'm' => f.mori = true,
                'P' => f.ip = true,
                'K' => f.laurent = true,
                'D' => f.dual_input = true,
                'M' => f.manual = true,
                'b' | 'i' | 'c' | 't' | 'd' | 'a' | 'H' => {
                    return Err(CliError::Capability(format!("option -{c} is not available in this tool")));
                }
                other => return Err(CliError::Usage(format!("unknown option -{other}"))),
            }
        }
    }
    if f.manual && f.laurent {
        return Err(CliError::Usage("-M cannot be combined with -K".into()));
    }
    if !(f.general || f.incidence || f.mori || f.ip || f.laurent) {
        f.general = true;
    }
    Ok(Some(f))
}

pub struct Mori {
    pub flags: Flags,
    pub common: Common,
    pub non_regular: bool,
}

pub fn run(l: &Legacy, s: Streams) -> i32 {
    let (args, non_regular) = take_long(&l.args, "--non-regular");
    let (opts, inp, out) = match split_args(&args) {
        Ok(x) => x,
        Err(e) => return fail(e, s),
    };
    let flags = match parse_flags(&opts) {
        Ok(Some(f)) => f,
        Ok(None) => {
            let _ = s.stdout.write_all(HELP.as_bytes());
            return 0;
        }
        Err(e) => return fail(e, s),
    };
    let filter = flags.filter;
    let job = Mori {
        flags,
        common: l.common.clone(),
        non_regular,
    };
    drive(&job, &l.common, filter, inp, out, s)
}

/// The points of P* in display order, the number of relevant ones, and the polytopes involved.
struct Setup {
    points: Vec<Point>,
    n: usize,
    dim: usize,
    pstar: LatticePolytope,
    facets: FacetSystem,
    /// The M-lattice polytope, when P* is reflexive.
    m: Option<(LatticePolytope, FacetSystem)>,
}

impl Mori {
    fn setup(&self, rec: &Record) -> Result<Setup, CliError> {
        let fl = &self.flags;
        match (&rec.kind, fl.dual_input) {
            (RecordKind::Cws(c), false) => {
                let cp = polytope_from_cws(c)?;
                self.common.check_dim(cp.polytope.dim(), "dimension")?;
                if !cp.facets.is_reflexive() {
                    return Err(CliError::Domain(format!("{c}: the polytope is not reflexive")));
                }
                let (pstar, fs) = dual(&cp.polytope, &cp.facets)?;
                self.common.check_points(pstar.np())?;
                let (points, n) = relevant_points(&pstar, &fs, fl.manual);
                let dim = pstar.dim();
                Ok(Setup {
                    points,
                    n,
                    dim,
                    pstar,
                    facets: fs,
                    m: Some((cp.polytope, cp.facets)),
                })
            }
            (RecordKind::Matrix { points, dim }, true) => {
                self.common.check_dim(*dim, "dimension")?;
                let (p, f) = analyze(points, *dim)?;
                if fl.manual {
                    let pts = user_points(points, *dim);
                    let n = pts.len() - 1;
                    let m = if f.is_reflexive() {
                        let full = complete_points(&p, &f)?;
                        Some(dual(&full, &f)?)
                    } else {
                        None
                    };
                    return Ok(Setup {
                        points: pts,
                        n,
                        dim: *dim,
                        pstar: p,
                        facets: f,
                        m,
                    });
                }
                if !f.is_reflexive() {
                    return Err(CliError::Domain("the input polytope P* is not reflexive".into()));
                }
                let pstar = complete_points(&p, &f)?;
                self.common.check_points(pstar.np())?;
                let (pts, n) = relevant_points(&pstar, &f, false);
                let m = dual(&pstar, &f)?;
                Ok(Setup {
                    points: pts,
                    n,
                    dim: *dim,
                    pstar,
                    facets: f,
                    m: Some(m),
                })
            }
            (RecordKind::Matrix { .. }, false) => {
                Err(CliError::Domain("matrix input describes P* and needs -D".into()))
            }
            (RecordKind::Cws(_), true) => Err(CliError::Domain("with -D the input must be a point matrix".into())),
        }
    }

    fn read_triangulations(&self, s: &Setup, io: &mut Io) -> Result<Vec<Triangulation>, CliError> {
        let k = io.read_int("`#triangulations': ", "number of triangulations")?;
        if k < 0 {
            return Err(CliError::Domain("the number of triangulations must not be negative".into()));
        }
        let mut raw: Vec<Vec<String>> = Vec::new();
        for _ in 0..k {
            let c = io.read_int("", "number of simplices")?;
            let mut t = Vec::new();
            for _ in 0..c.max(0) {
                let (line, col, w) = io.read_token("simplex bit string")?;
                if w.len() != s.n || !w.chars().all(|x| x == '0' || x == '1') {
                    return Err(CliError::Parse {
                        line,
                        col,
                        msg: format!("expected a bit string of length {}, found `{w}`", s.n),
                    });
                }
                t.push(w);
            }
            raw.push(t);
        }
        io.out.push_str(&format!("{k} triangulations:\n"));
        for t in &raw {
            io.out.push_str(&format!("{} {}\n", t.len(), t.join(" ")));
        }
        raw.iter()
            .map(|t| {
                let simplices: Vec<Simplex> = t
                    .iter()
                    .map(|w| w.chars().enumerate().filter(|(_, c)| *c == '1').map(|(i, _)| i).collect())
                    .collect();
                Ok(validate_triangulation(&s.points, s.n, s.dim, simplices)?)
            })
            .collect()
    }
}

impl Job for Mori {
    fn prompt(&self) -> String {
        if self.flags.dual_input {
            "`#lines #columns' (= `PolyDim #Points' or `#Points PolyDim'):\n".into()
        } else {
            "Degrees and weights  `d1 w11 w12 ... d2 w21 w22 ...':\n".into()
        }
    }

    fn needs_input(&self) -> bool {
        self.flags.manual
    }

    fn process(&self, rec: &Record, io: &mut Io) -> Result<(), CliError> {
        let fl = &self.flags;
        let s = self.setup(rec)?;
        let n = s.n;
        let triangulations = if fl.manual {
            io.out.push_str(&format!("{} {}  \n", s.dim, s.points.len()));
            io.out.push_str(&columns(&s.points, s.dim, 5));
            self.read_triangulations(&s, io)?
        } else {
            Vec::new()
        };
        if fl.ip {
            let sims = ip_simplices(&s.points[..n], s.dim, None)?;
            io.out.push_str(&format!("{} {}  points of P* and IP-simplices\n", s.dim, s.points.len()));
            io.out.push_str(&columns(&s.points, s.dim, 5));
            io.out.push_str(&format!("{}   #IP-simp={}\n", dashes(5 * n), sims.len()));
            for sim in &sims {
                io.out.push_str(&format!("{}{:>4}=d  codim={}\n", row(&sim.weights, 5), sim.degree, sim.codim));
            }
        }
        if fl.incidence {
            io.out
                .push_str(&format!("Incidence: {}\n", facet_incidences(&s.points, n, &s.facets).join(" ")));
        }
        if fl.laurent {
            let nonzero = s.points.iter().filter(|x| x.iter().any(|&y| y != 0)).count();
            let pic = match &s.m {
                Some((m, mf)) if s.dim >= 3 => {
                    let full = complete_points(&s.pstar, &s.facets)?;
                    hodge_numbers((m, mf), (&full, &s.facets))?.h11
                }
                _ => n as i64 - s.dim as i64,
            };
            io.out.push_str(&format!(
                "KreuzerPoly={}; \nintpts={};  Pic={}\n",
                laurent_polynomial(&s.points[..n], s.pstar.nv()),
                nonzero - n,
                pic
            ));
        }
        if !(fl.general || fl.mori) {
            return Ok(());
        }
        let triangulations = if fl.manual {
            triangulations
        } else {
            auto_star_triangulations(&s.points, n, &s.facets, MAX_FACET_POINTS).map_err(|e| match e {
                latpoly::Error::Capability(m) => CliError::Capability(format!(
                    "{m}; supply a triangulation with -M (and -D for point input)"
                )),
                other => other.into(),
            })?
        };
        for t in &triangulations {
            if !t.regular && !self.non_regular && !fl.manual {
                continue;
            }
            let note = if t.regular { "" } else { " (non-regular)" };
            if fl.general {
                if !fl.manual {
                    let sb: Vec<String> = t.simplices.iter().map(|x| bits(x, n)).collect();
                    io.out.push_str(&format!("{} Triangulation{note}\n{}\n", sb.len(), sb.join(" ")));
                }
                let sr: Vec<String> = sr_ideal(t).iter().map(|x| bits(x, n)).collect();
                io.out.push_str(&format!("{} SR-ideal\n{}\n", sr.len(), sr.join(" ")));
            }
            if fl.mori {
                if !t.regular {
                    io.err.push_str("no Mori cone: the triangulation is not regular\n");
                    continue;
                }
                let mc = mori_generators(&s.points, t)?;
                io.out.push_str(&format!("{} MORI GENERATORS / dim(cone)={} \n", mc.generators.len(), mc.dim));
                for (g, inc) in mc.generators.iter().zip(&mc.incidence) {
                    let ib: String = inc.iter().map(|&b| if b { '1' } else { '0' }).collect();
                    io.out.push_str(&format!("{}   I:{ib}\n", row(g, 3)));
                }
            }
        }
        Ok(())
    }
}
