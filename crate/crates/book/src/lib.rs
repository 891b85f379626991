//! The guide's chapters, compiled as doctests.

macro_rules! chapter {
    ($name:ident, $file:literal) => {
        #[doc = include_str!(concat!("../../../book/src/", $file))]
        pub mod $name {}
    };
}

chapter!(introduction, "introduction.md");
chapter!(algebras, "algebras.md");
chapter!(geometry, "geometry.md");
chapter!(presentations, "presentations.md");
chapter!(models, "models.md");
chapter!(limits, "limits.md");
chapter!(unification, "unification.md");
chapter!(cli, "cli.md");
