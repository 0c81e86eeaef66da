//! Simple types over the four semantic atoms.

use std::fmt;

/// Atomic semantic types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// ι, individuals.
    Ind,
    /// t, propositions (also written `o`).
    Prop,
    /// v, events.
    Event,
    /// γ, left contexts.
    Ctx,
}

impl Atom {
    pub fn unicode(self) -> &'static str {
        match self {
            Atom::Ind => "ι",
            Atom::Prop => "t",
            Atom::Event => "v",
            Atom::Ctx => "γ",
        }
    }

    pub fn ascii(self) -> &'static str {
        match self {
            Atom::Ind => "i",
            Atom::Prop => "t",
            Atom::Event => "v",
            Atom::Ctx => "g",
        }
    }

    /// Accepts both the ASCII and Unicode spellings, plus `o` for t.
    pub fn from_name(name: &str) -> Option<Atom> {
        match name {
            "i" | "ι" => Some(Atom::Ind),
            "t" | "o" => Some(Atom::Prop),
            "v" => Some(Atom::Event),
            "g" | "γ" => Some(Atom::Ctx),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemType {
    Atom(Atom),
    Arrow(Box<SemType>, Box<SemType>),
}

impl SemType {
    pub const IND: SemType = SemType::Atom(Atom::Ind);
    pub const PROP: SemType = SemType::Atom(Atom::Prop);
    pub const EVENT: SemType = SemType::Atom(Atom::Event);
    pub const CTX: SemType = SemType::Atom(Atom::Ctx);

    pub fn arrow(domain: SemType, codomain: SemType) -> SemType {
        SemType::Arrow(Box::new(domain), Box::new(codomain))
    }

    /// Right-folds `args -> result`.
    pub fn curried<I>(args: I, result: SemType) -> SemType
    where
        I: IntoIterator<Item = SemType>,
        I::IntoIter: DoubleEndedIterator,
    {
        args.into_iter()
            .rev()
            .fold(result, |acc, arg| SemType::arrow(arg, acc))
    }

    pub fn is_atom(&self, atom: Atom) -> bool {
        matches!(self, SemType::Atom(a) if *a == atom)
    }

    pub fn as_arrow(&self) -> Option<(&SemType, &SemType)> {
        match self {
            SemType::Arrow(d, c) => Some((d, c)),
            SemType::Atom(_) => None,
        }
    }

    /// Order of the type: atoms have height 0, `a -> b` has
    /// `max(height(a) + 1, height(b))`.
    pub fn height(&self) -> u32 {
        match self {
            SemType::Atom(_) => 0,
            SemType::Arrow(d, c) => (d.height() + 1).max(c.height()),
        }
    }

    /// γ → (γ → t) → t, the type of discourses (and of baseline sentences).
    pub fn discourse() -> SemType {
        SemType::curried(
            [SemType::CTX, SemType::arrow(SemType::CTX, SemType::PROP)],
            SemType::PROP,
        )
    }

    /// v → γ → (γ → t) → t, the type of event-mode sentences.
    pub fn dynamic_sentence() -> SemType {
        SemType::arrow(SemType::EVENT, SemType::discourse())
    }

    /// v → t, the type of static event-mode sentences before closure.
    pub fn static_sentence() -> SemType {
        SemType::arrow(SemType::EVENT, SemType::PROP)
    }

    pub fn display(&self, style: Style) -> TypeDisplay<'_> {
        TypeDisplay { ty: self, style }
    }
}

impl From<Atom> for SemType {
    fn from(atom: Atom) -> Self {
        SemType::Atom(atom)
    }
}

/// Rendering style shared by types and terms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Style {
    Ascii,
    #[default]
    Unicode,
}

pub struct TypeDisplay<'a> {
    ty: &'a SemType,
    style: Style,
}

impl fmt::Display for TypeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_type(f, self.ty, self.style)
    }
}

fn write_type(f: &mut fmt::Formatter<'_>, ty: &SemType, style: Style) -> fmt::Result {
    match ty {
        SemType::Atom(a) => f.write_str(match style {
            Style::Ascii => a.ascii(),
            Style::Unicode => a.unicode(),
        }),
        SemType::Arrow(d, c) => {
            if d.as_arrow().is_some() {
                f.write_str("(")?;
                write_type(f, d, style)?;
                f.write_str(")")?;
            } else {
                write_type(f, d, style)?;
            }
            f.write_str(match style {
                Style::Ascii => " -> ",
                Style::Unicode => "→",
            })?;
            write_type(f, c, style)
        }
    }
}

impl fmt::Display for SemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_type(f, self, Style::Unicode)
    }
}
