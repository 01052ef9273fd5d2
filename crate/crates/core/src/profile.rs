//! IG profile expressions such as `IG Core-IO+R`.
//!
//! A profile starts from one of the three levels and removes or adds
//! features. Umbrella symbols (`B`, `C`, `B_Ext`, `C_Ext`, `U`) stand for
//! their members; the expanded set holds members only.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum Feature {
    A,
    B,
    Bdir,
    Bind,
    D,
    I,
    C,
    Cac,
    Cex,
    O,
    P,
    M,
    E,
    F,
    A_Ext,
    B_Ext,
    Bdir_Ext,
    Bind_Ext,
    C_Ext,
    Cac_Ext,
    Cex_Ext,
    P_Ext,
    E_Ext,
    R,
    L,
    S,
    U,
    U_reg,
    U_con,
}

use Feature::*;

impl Feature {
    /// Table order.
    pub const ALL: [Feature; 29] = [
        A, B, Bdir, Bind, D, I, C, Cac, Cex, O, P, M, E, F, A_Ext, B_Ext, Bdir_Ext, Bind_Ext,
        C_Ext, Cac_Ext, Cex_Ext, P_Ext, E_Ext, R, L, S, U, U_reg, U_con,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            A => "A",
            B => "B",
            Bdir => "Bdir",
            Bind => "Bind",
            D => "D",
            I => "I",
            C => "C",
            Cac => "Cac",
            Cex => "Cex",
            O => "O",
            P => "P",
            M => "M",
            E => "E",
            F => "F",
            A_Ext => "A_Ext",
            B_Ext => "B_Ext",
            Bdir_Ext => "Bdir_Ext",
            Bind_Ext => "Bind_Ext",
            C_Ext => "C_Ext",
            Cac_Ext => "Cac_Ext",
            Cex_Ext => "Cex_Ext",
            P_Ext => "P_Ext",
            E_Ext => "E_Ext",
            R => "R",
            L => "L",
            S => "S",
            U => "U",
            U_reg => "U_reg",
            U_con => "U_con",
        }
    }

    pub fn members(self) -> &'static [Feature] {
        match self {
            B => &[Bdir, Bind],
            C => &[Cac, Cex],
            B_Ext => &[Bdir_Ext, Bind_Ext],
            C_Ext => &[Cac_Ext, Cex_Ext],
            U => &[U_reg, U_con],
            A => &[A],
            Bdir => &[Bdir],
            Bind => &[Bind],
            D => &[D],
            I => &[I],
            Cac => &[Cac],
            Cex => &[Cex],
            O => &[O],
            P => &[P],
            M => &[M],
            E => &[E],
            F => &[F],
            A_Ext => &[A_Ext],
            Bdir_Ext => &[Bdir_Ext],
            Bind_Ext => &[Bind_Ext],
            Cac_Ext => &[Cac_Ext],
            Cex_Ext => &[Cex_Ext],
            P_Ext => &[P_Ext],
            E_Ext => &[E_Ext],
            R => &[R],
            L => &[L],
            S => &[S],
            U_reg => &[U_reg],
            U_con => &[U_con],
        }
    }

    pub fn is_umbrella(self) -> bool {
        matches!(self, B | C | B_Ext | C_Ext | U)
    }

    /// The Extended-level counterpart of a Core feature.
    pub fn extended(self) -> Option<Feature> {
        Some(match self {
            A => A_Ext,
            B => B_Ext,
            Bdir => Bdir_Ext,
            Bind => Bind_Ext,
            C => C_Ext,
            Cac => Cac_Ext,
            Cex => Cex_Ext,
            P => P_Ext,
            E => E_Ext,
            _ => return None,
        })
    }

    pub fn from_symbol(s: &str) -> Option<Feature> {
        Feature::ALL.iter().copied().find(|f| f.symbol() == s)
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IgLevel {
    Core,
    Extended,
    Logico,
}

impl IgLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            IgLevel::Core => "Core",
            IgLevel::Extended => "Extended",
            IgLevel::Logico => "Logico",
        }
    }

    pub fn features(self) -> BTreeSet<Feature> {
        let core = [A, Bdir, Bind, D, I, Cac, Cex, O, P, M, E, F];
        let ext = [A_Ext, Bdir_Ext, Bind_Ext, Cac_Ext, Cex_Ext, P_Ext, E_Ext];
        let logico = [R, L, S, U_reg, U_con];
        let mut set: BTreeSet<Feature> = core.into_iter().collect();
        if self >= IgLevel::Extended {
            set.extend(ext);
        }
        if self >= IgLevel::Logico {
            set.extend(logico);
        }
        set
    }
}

impl FromStr for IgLevel {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "core" => Ok(IgLevel::Core),
            "extended" => Ok(IgLevel::Extended),
            "logico" => Ok(IgLevel::Logico),
            _ => Err(ProfileError::UnknownBaseline(s.to_string())),
        }
    }
}

impl fmt::Display for IgLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("unknown baseline `{0}` (expected Core, Extended or Logico)")]
    UnknownBaseline(String),
    #[error("unknown feature symbol at `{0}`")]
    UnknownFeatureSymbol(String),
    #[error("cannot remove `{0}`: not in the baseline")]
    RemovalNotInBaseline(Feature),
    #[error("cannot add `{0}`: already present")]
    AdditionAlreadyPresent(Feature),
    #[error("`{0}` is both removed and added")]
    RemovedAndAdded(Feature),
    #[error("malformed profile expression: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProfileExpression {
    pub baseline: IgLevel,
    pub removals: Vec<Feature>,
    pub additions: Vec<Feature>,
}

impl ProfileExpression {
    pub fn parse(text: &str) -> Result<Self, ProfileError> {
        let t = text.trim();
        let rest = t
            .strip_prefix("IG")
            .ok_or_else(|| ProfileError::Malformed("expressions start with `IG`".into()))?
            .trim_start();
        let level_len = rest.find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(rest.len());
        let baseline: IgLevel = rest[..level_len].parse()?;
        let mut removals = Vec::new();
        let mut additions = Vec::new();
        let mut s = rest[level_len..].trim_start();
        while !s.is_empty() {
            let (target, after) = if let Some(r) = s.strip_prefix("--") {
                (&mut removals, r)
            } else if let Some(r) = s.strip_prefix(['-', '–', '—']) {
                (&mut removals, r)
            } else if let Some(r) = s.strip_prefix('+') {
                (&mut additions, r)
            } else {
                return Err(ProfileError::UnknownFeatureSymbol(s.to_string()));
            };
            s = after.trim_start();
            let before = target.len();
            while let Some((f, len)) = longest_symbol(s) {
                target.push(f);
                s = s[len..].trim_start();
            }
            if target.len() == before {
                return Err(if s.is_empty() {
                    ProfileError::Malformed("empty feature list".into())
                } else {
                    ProfileError::UnknownFeatureSymbol(s.to_string())
                });
            }
            if !s.is_empty() && !s.starts_with(['-', '+', '–', '—']) {
                return Err(ProfileError::UnknownFeatureSymbol(s.to_string()));
            }
        }
        removals.sort();
        removals.dedup();
        additions.sort();
        additions.dedup();
        Ok(ProfileExpression { baseline, removals, additions })
    }

    /// Canonical text: single `-`, symbols in table order.
    pub fn format(&self) -> String {
        let mut s = format!("IG {}", self.baseline);
        if !self.removals.is_empty() {
            s.push('-');
            s.extend(self.removals.iter().map(|f| f.symbol()));
        }
        if !self.additions.is_empty() {
            s.push('+');
            s.extend(self.additions.iter().map(|f| f.symbol()));
        }
        s
    }

    pub fn expand(&self) -> Result<Profile, ProfileError> {
        let mut set = self.baseline.features();
        let base = set.clone();
        for &f in &self.removals {
            if self.additions.contains(&f) {
                return Err(ProfileError::RemovedAndAdded(f));
            }
            let ext: Vec<Feature> = f
                .extended()
                .map(|e| e.members().iter().copied().filter(|m| base.contains(m)).collect())
                .unwrap_or_default();
            let plain: Vec<Feature> = f.members().iter().copied().filter(|m| base.contains(m)).collect();
            let drop = if !ext.is_empty() { ext } else { plain };
            if drop.is_empty() {
                return Err(ProfileError::RemovalNotInBaseline(f));
            }
            for m in drop {
                set.remove(&m);
            }
        }
        for &f in &self.additions {
            if f.members().iter().all(|m| set.contains(m)) {
                return Err(ProfileError::AdditionAlreadyPresent(f));
            }
            set.extend(f.members().iter().copied());
        }
        Ok(Profile { expression: self.clone(), features: set })
    }
}

impl fmt::Display for ProfileExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

fn longest_symbol(s: &str) -> Option<(Feature, usize)> {
    let mut best: Option<(Feature, usize)> = None;
    for f in Feature::ALL {
        let sym = f.symbol();
        let mut lens = vec![];
        if s.starts_with(sym) {
            lens.push(sym.len());
        }
        // Accept the `X,Ext` spelling for `X_Ext`.
        if let Some(base) = sym.strip_suffix("_Ext") {
            let alt = format!("{base},Ext");
            if s.starts_with(&alt) {
                lens.push(alt.len());
            }
        }
        for len in lens {
            if best.is_none_or(|(_, l)| len > l) {
                best = Some((f, len));
            }
        }
    }
    best
}

/// An expanded profile: the set of features it permits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    pub expression: ProfileExpression,
    pub features: BTreeSet<Feature>,
}

impl Profile {
    pub fn parse(text: &str) -> Result<Profile, ProfileError> {
        ProfileExpression::parse(text)?.expand()
    }

    pub fn level(level: IgLevel) -> Profile {
        ProfileExpression { baseline: level, removals: vec![], additions: vec![] }
            .expand()
            .expect("bare levels always expand")
    }

    /// True if the feature, or any member of an umbrella, is permitted.
    pub fn includes(&self, f: Feature) -> bool {
        f.members().iter().any(|m| self.features.contains(m))
    }

    /// Symbols for display, with complete umbrellas collapsed.
    pub fn display_symbols(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for f in Feature::ALL {
            if f.is_umbrella() {
                if f.members().iter().all(|m| self.features.contains(m)) {
                    out.push(f.symbol());
                }
            } else if self.features.contains(&f) {
                let covered = Feature::ALL.iter().any(|u| {
                    u.is_umbrella() && u.members().contains(&f) && u.members().iter().all(|m| self.features.contains(m))
                });
                if !covered {
                    out.push(f.symbol());
                }
            }
        }
        out
    }
}

impl FromStr for Profile {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Profile::parse(s)
    }
}
