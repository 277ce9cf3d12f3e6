use alloc::sync::Arc;
use core::fmt;

/// Name of the feature that carries a constituent's category.
pub const CATEGORY: &str = "cat";
/// Arc that holds the rule dag inside a reachability entry.
pub const LEFT_CORNER: &str = "lc";

macro_rules! interned {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(name: &str) -> Self {
                $name(Arc::from(name))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl From<&str> for $name {
            fn from(name: &str) -> Self {
                $name::new(name)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

interned!(
    /// An arc label. Numbered arcs (`1`, `2`, ...) and `lc` are ordinary
    /// labels as far as the dag algebra is concerned.
    Feature
);

interned!(
    /// An atomic constant. Atoms are values: two paths ending in the same
    /// constant are indistinguishable from two paths sharing one atom node.
    Atom
);

impl Feature {
    pub fn category() -> Self {
        Feature::new(CATEGORY)
    }

    pub fn left_corner() -> Self {
        Feature::new(LEFT_CORNER)
    }

    pub fn numbered(index: usize) -> Self {
        Feature::new(&alloc::format!("{index}"))
    }

    pub fn is_category(&self) -> bool {
        self.as_str() == CATEGORY
    }

    pub fn is_left_corner(&self) -> bool {
        self.as_str() == LEFT_CORNER
    }

    /// The constituent index of a numbered arc.
    pub fn position(&self) -> Option<usize> {
        let s = self.as_str();
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        s.parse().ok()
    }

    pub fn is_numbered(&self) -> bool {
        self.position().is_some()
    }

    /// Labels that encode rule and table layout rather than linguistic
    /// content. They never enter a restrictor.
    pub fn is_structural(&self) -> bool {
        self.is_left_corner() || self.is_numbered()
    }
}
