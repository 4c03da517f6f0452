//! `latpoly cws`: weight systems of polytopes.


use latpoly::cws::{polytope_from_cws, reconstruct_cws};
use latpoly::polytope::{analyze, dual};

use crate::input::{Record, RecordKind};
use crate::{drive, fail, split_args, CliError, Common, Io, Job, Legacy, Streams};

pub const HELP: &str = "\
Option strings:
  h  this information            f  use as filter (no prompts)
  N  weight system (with quotients) of the reflexive pair whose N-lattice polytope is the input matrix
  i  M:p v N:p v (or M:p v F:f) for weight input with the interior point property
Not available: w c d 2 x (enumeration of weight systems).
";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Reconstruct,
    Data,
}

pub struct CwsJob {
    mode: Mode,
    common: Common,
}

pub fn run(l: &Legacy, s: Streams) -> i32 {
    let (opts, inp, out) = match split_args(&l.args) {
        Ok(x) => x,
        Err(e) => return fail(e, s),
    };
    let mut filter = false;
    let mut mode = None;
    for o in &opts {
        for c in o.chars().skip(1) {
            match c {
                'h' => {
                    let _ = s.stdout.write_all(HELP.as_bytes());
                    return 0;
                }
                'f' => filter = true,
                'N' => mode = Some(Mode::Reconstruct),
                'i' => mode = Some(Mode::Data),
                'w' | 'c' | 'd' | '2' | 'x' | 'r' => {
                    return fail(CliError::Capability(format!("option -{c} is not available in this tool")), s)
                }
                other => return fail(CliError::Usage(format!("unknown option -{other}")), s),
            }
        }
    }
    let Some(mode) = mode else {
        return fail(CliError::Usage("choose -N or -i".into()), s);
    };
    let job = CwsJob {
        mode,
        common: l.common.clone(),
    };
    drive(&job, &l.common, filter, inp, out, s)
}

impl Job for CwsJob {
    fn prompt(&self) -> String {
        match self.mode {
            Mode::Reconstruct => "`#lines #columns' (= `PolyDim #Points' or `#Points PolyDim'):\n".into(),
            Mode::Data => "Degrees and weights  `d1 w11 w12 ... d2 w21 w22 ...':\n".into(),
        }
    }

    fn process(&self, rec: &Record, io: &mut Io) -> Result<(), CliError> {
        match (&rec.kind, self.mode) {
            (RecordKind::Matrix { points, dim }, Mode::Reconstruct) => {
                self.common.check_dim(*dim, "dimension")?;
                let (p, _) = analyze(points, *dim)?;
                let c = reconstruct_cws(&p)?;
                io.out.push_str(&format!("{c}\n"));
            }
            (RecordKind::Cws(_), Mode::Reconstruct) => {
                return Err(CliError::Domain("-N needs matrix input".into()));
            }
            (RecordKind::Cws(c), Mode::Data) => {
                let cp = polytope_from_cws(c)?;
                self.common.check_dim(cp.polytope.dim(), "dimension")?;
                let (p, f) = (cp.polytope, cp.facets);
                if !f.is_ip() {
                    return Ok(());
                }
                let mut s = format!("{c} M:{} {}", p.np(), p.nv());
                if f.is_reflexive() {
                    let (n, _) = dual(&p, &f)?;
                    s.push_str(&format!(" N:{} {}", n.np(), n.nv()));
                } else {
                    s.push_str(&format!(" F:{}", f.len()));
                }
                io.out.push_str(&s);
                io.out.push('\n');
            }
            (RecordKind::Matrix { .. }, Mode::Data) => {
                return Err(CliError::Domain("-i needs weight system input".into()));
            }
        }
        Ok(())
    }
}
