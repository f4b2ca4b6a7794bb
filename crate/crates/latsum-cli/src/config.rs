//! Job configuration shared by every subcommand, with a canonical
//! `key = value` text form that parses back to the same configuration.

use std::fmt;
use std::str::FromStr;

use latsum::{CanonicalLattice, LatticeSpec};
use num_complex::Complex64;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Sigma,
    S,
    Eta,
    Table1,
    Verify,
    Points,
}

impl CommandKind {
    pub const ALL: [CommandKind; 6] =
        [CommandKind::Sigma, CommandKind::S, CommandKind::Eta, CommandKind::Table1, CommandKind::Verify, CommandKind::Points];

    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Sigma => "sigma",
            CommandKind::S => "S",
            CommandKind::Eta => "eta",
            CommandKind::Table1 => "table1",
            CommandKind::Verify => "verify",
            CommandKind::Points => "points",
        }
    }
}

/// A canonical lattice keyword or an explicit τ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LatticeArg {
    Keyword(CanonicalLattice),
    Tau(Complex64),
}

impl LatticeArg {
    pub fn tau(self) -> Complex64 {
        match self {
            LatticeArg::Keyword(k) => k.tau(),
            LatticeArg::Tau(t) => t,
        }
    }

    pub fn canonical(self) -> Option<CanonicalLattice> {
        match self {
            LatticeArg::Keyword(k) => Some(k),
            LatticeArg::Tau(t) => CanonicalLattice::from_tau(t),
        }
    }
}

impl fmt::Display for LatticeArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeArg::Keyword(k) => f.write_str(k.name()),
            LatticeArg::Tau(t) => write!(f, "{},{}", t.re, t.im),
        }
    }
}

impl FromStr for LatticeArg {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if let Some(k) = CanonicalLattice::from_name(s) {
            return Ok(LatticeArg::Keyword(k));
        }
        parse_tau(s).map(LatticeArg::Tau)
    }
}

/// `re,im` to a complex τ.
pub fn parse_tau(s: &str) -> Result<Complex64, CliError> {
    let (re, im) = s.split_once(',').ok_or_else(|| CliError::usage(format!("tau {s:?} must be written re,im")))?;
    let re: f64 = re.trim().parse().map_err(|_| CliError::usage(format!("bad real part in {s:?}")))?;
    let im: f64 = im.trim().parse().map_err(|_| CliError::usage(format!("bad imaginary part in {s:?}")))?;
    Ok(Complex64::new(re, im))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        }
    }
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(CliError::usage(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Modular,
    Eisenstein,
    Cylsum,
    Displaced,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Modular => "modular",
            Suite::Eisenstein => "eisenstein",
            Suite::Cylsum => "cylsum",
            Suite::Displaced => "displaced",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        [Suite::Modular, Suite::Eisenstein, Suite::Cylsum, Suite::Displaced, Suite::All]
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| CliError::usage(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub command: CommandKind,
    pub lattice: LatticeArg,
    pub a: f64,
    pub n: u32,
    pub m: i32,
    pub l: u32,
    pub u: Vec<f64>,
    /// Oracle and point-listing radius; `None` picks a per-command default.
    pub radius: Option<f64>,
    pub format: Format,
    /// Strip the extraordinary term from n = 2 results.
    pub regularize: bool,
    pub set: Option<String>,
    pub reciprocal: bool,
    pub verify_oracle: bool,
    pub suite: Suite,
}

impl JobConfig {
    pub fn new(command: CommandKind) -> Self {
        Self {
            command,
            lattice: LatticeArg::Keyword(CanonicalLattice::Square),
            a: 1.0,
            n: 2,
            m: 0,
            l: 0,
            u: Vec::new(),
            radius: None,
            format: Format::Text,
            regularize: true,
            set: None,
            reciprocal: false,
            verify_oracle: false,
            suite: Suite::All,
        }
    }

    pub fn spec(&self) -> Result<LatticeSpec, CliError> {
        Ok(LatticeSpec::new(self.lattice.tau(), self.a)?)
    }

    /// One `key = value` line per field in a fixed order.
    pub fn to_canonical(&self) -> String {
        let u: Vec<String> = self.u.iter().map(|x| x.to_string()).collect();
        let radius = self.radius.map_or("default".to_string(), |r| r.to_string());
        let set = self.set.clone().unwrap_or_else(|| "none".into());
        [
            ("command", self.command.name().to_string()),
            ("lattice", self.lattice.to_string()),
            ("a", self.a.to_string()),
            ("n", self.n.to_string()),
            ("m", self.m.to_string()),
            ("l", self.l.to_string()),
            ("u", u.join(",")),
            ("radius", radius),
            ("format", self.format.name().to_string()),
            ("regularize", self.regularize.to_string()),
            ("set", set),
            ("reciprocal", self.reciprocal.to_string()),
            ("verify_oracle", self.verify_oracle.to_string()),
            ("suite", self.suite.name().to_string()),
        ]
        .into_iter()
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect()
    }

    pub fn from_canonical(text: &str) -> Result<Self, CliError> {
        let mut cfg: Option<JobConfig> = None;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (key, value) = line.split_once('=').ok_or_else(|| CliError::usage(format!("bad config line {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "command" {
                let kind = CommandKind::ALL
                    .into_iter()
                    .find(|c| c.name() == value)
                    .ok_or_else(|| CliError::usage(format!("unknown command {value:?}")))?;
                cfg = Some(JobConfig::new(kind));
                continue;
            }
            let c = cfg.as_mut().ok_or_else(|| CliError::usage("config must start with a command line"))?;
            let bad = || CliError::usage(format!("bad value {value:?} for {key}"));
            match key {
                "lattice" => c.lattice = value.parse()?,
                "a" => c.a = value.parse().map_err(|_| bad())?,
                "n" => c.n = value.parse().map_err(|_| bad())?,
                "m" => c.m = value.parse().map_err(|_| bad())?,
                "l" => c.l = value.parse().map_err(|_| bad())?,
                "u" => {
                    c.u = if value.is_empty() {
                        Vec::new()
                    } else {
                        value.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
                    }
                }
                "radius" => c.radius = if value == "default" { None } else { Some(value.parse().map_err(|_| bad())?) },
                "format" => c.format = value.parse()?,
                "regularize" => c.regularize = value.parse().map_err(|_| bad())?,
                "set" => c.set = if value == "none" { None } else { Some(value.to_string()) },
                "reciprocal" => c.reciprocal = value.parse().map_err(|_| bad())?,
                "verify_oracle" => c.verify_oracle = value.parse().map_err(|_| bad())?,
                "suite" => c.suite = value.parse()?,
                _ => return Err(CliError::usage(format!("unknown config key {key:?}"))),
            }
        }
        cfg.ok_or_else(|| CliError::usage("empty config"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text_parses_back() {
        let mut c = JobConfig::new(CommandKind::S);
        c.lattice = LatticeArg::Tau(Complex64::new(0.3, 1.2));
        c.u = vec![0.05, 0.1];
        c.set = Some("M".into());
        c.radius = Some(1256.6);
        let text = c.to_canonical();
        let back = JobConfig::from_canonical(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_canonical(), text);
    }

    #[test]
    fn lattice_keywords() {
        assert_eq!("hex".parse::<LatticeArg>().unwrap(), LatticeArg::Keyword(CanonicalLattice::Hexagonal));
        assert_eq!("0.5,2".parse::<LatticeArg>().unwrap(), LatticeArg::Tau(Complex64::new(0.5, 2.0)));
        assert!("oblique".parse::<LatticeArg>().is_err());
    }
}
