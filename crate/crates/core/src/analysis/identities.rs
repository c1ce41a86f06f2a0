//! Registry of checked identities: stable ids, the statement each one
//! checks, and the hypothesis gating it.

use serde::Serialize;

/// Hypothesis an identity depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gate {
    /// Holds on every Finsler space.
    Always,
    /// Scalar curvature with `r ≠ 0`.
    Scalar,
    CReducible,
    Landsberg,
    /// Landsberg, scalar curvature, `r ≠ 0`.
    LandsbergScalar,
    /// Landsberg and C-reducible, `n ≥ 3`.
    LandsbergCReducible,
    /// Berwald, scalar curvature, `r ≠ 0`, `n ≥ 3`.
    BerwaldScalar,
}

macro_rules! identities {
    ($($variant:ident => $id:literal, $gate:ident, $statement:literal;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum IdentityId {
            $($variant,)*
        }

        impl IdentityId {
            pub const ALL: &'static [IdentityId] = &[$(IdentityId::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(IdentityId::$variant => $id,)*
                }
            }

            pub fn gate(self) -> Gate {
                match self {
                    $(IdentityId::$variant => Gate::$gate,)*
                }
            }

            /// The statement being checked.
            pub fn statement(self) -> &'static str {
                match self {
                    $(IdentityId::$variant => $statement,)*
                }
            }
        }
    };
}

identities! {
    CartanTensorSymmetry => "cartan-tensor-symmetry", Always,
        "T, ħ and g are totally symmetric";
    CartanVerticalDerivativeSymmetry => "cartan-vertical-derivative-symmetry", Always,
        "∇_γT is totally symmetric";
    SupportingElementGradient => "supporting-element-gradient", Always,
        "∇_γL = D°_γL = ℓ and ∇_γℓ = D°_γℓ = L⁻¹ħ";
    AngularEndomorphismVertical => "angular-endomorphism-vertical", Always,
        "D°_γφ = −L⁻²ħ⊗η − L⁻¹φ⊗ℓ";
    BerwaldVerticalAngularMetric => "berwald-vertical-angular-metric", Always,
        "(D°_γX ħ)(Y,Z) = 2T(X,Y,Z) − L⁻¹ħ(X,Y)ℓ(Z) − L⁻¹ħ(X,Z)ℓ(Y)";
    CartanVerticalAngularMetric => "cartan-vertical-angular-metric", Always,
        "(∇_γX ħ)(Y,Z) = −L⁻¹ħ(X,Y)ℓ(Z) − L⁻¹ħ(X,Z)ℓ(Y)";
    FundamentalHomogeneity => "fundamental-homogeneity", Always,
        "g(η,η) = L², ħ(·,η) = 0, T(·,·,η) = 0, φ(η) = 0";
    AngularProjector => "angular-projector", Always,
        "φ∘φ = φ and tr φ = n − 1";
    ContractedTorsionTwoRoute => "contracted-torsion-two-route", Always,
        "C = ∂/∂y log √det g";
    SprayHomogeneity => "spray-homogeneity", Always,
        "N(η) = 2G, G^i_jk y^k = N^i_j, Γ^i_jk y^k = N^i_j, Γ symmetric";
    CartanMetricity => "cartan-metricity", Always,
        "∇_βg = 0 and ∇_γg = 0";
    Deflection => "deflection", Always,
        "D°_βη = 0 and ∇_βη = 0";
    HorizontalInvarianceOfL => "horizontal-invariance-of-l", Always,
        "δL/δx = 0 and D°_βℓ = 0";
    BerwaldCartanVertical => "berwald-cartan-vertical", Always,
        "D°_γX Y = ∇_γX Y − T(X,Y)";
    BerwaldCartanHorizontal => "berwald-cartan-horizontal", Always,
        "D°_βX Y = ∇_βX Y + P̂(X,Y)";
    BerwaldHvCurvatureSymmetry => "berwald-hv-curvature-symmetry", Always,
        "P° totally symmetric in its lower slots and P°(η,·)· = 0";
    DeviationDirection => "deviation-direction", Always,
        "H(η) = 0";
    VhTorsionContraction => "vh-torsion-contraction", Always,
        "R̂(η,X) = H(X)";
    VhTorsionBracket => "vh-torsion-bracket", Always,
        "R̂^i_jk = δN^i_j/δx^k − δN^i_k/δx^j";
    HCurvatureStructure => "h-curvature-structure", Always,
        "R°(X,Y) = −R°(Y,X) and R°(X,Y)η = R̂(X,Y)";
    LandsbergTwoRoute => "landsberg-two-route", Always,
        "−½ y_s P°^s_ijk = y^m (∇_βm T)_ijk, totally symmetric, annihilates η";
    SecondBianchi => "second-bianchi", Always,
        "Σ_cyc{(D°_βX R°)(Y,Z,W) + P°(R̂(X,Y),Z)W} = 0";
    HvExchange => "hv-exchange", Always,
        "(D°_βη P°)(Y,X)W = (D°_γX R°)(Y,η)W";
    VhTorsionCyclic => "vh-torsion-cyclic", Always,
        "Σ_cyc (D°_βX R̂)(Y,Z) = 0";
    CartanVCurvatureAntisymmetry => "cartan-v-curvature-antisymmetry", Always,
        "S(X,Y) = −S(Y,X)";
    VerticalCSymmetry => "vertical-c-symmetry", Always,
        "(∇_γX C)(Y) = (∇_γY C)(X)";

    ScalarCurvatureHomogeneity => "scalar-curvature-homogeneity", Scalar,
        "y^i ∂r/∂y^i = 0";
    AuxAEtaFirst => "aux-a-eta-first", Scalar,
        "A(η,X) = rLℓ(X) + ⅔L² D°_γX r";
    AuxAEtaSecond => "aux-a-eta-second", Scalar,
        "A(X,η) = B(X)";
    AuxEtaEta => "aux-eta-eta", Scalar,
        "A(η,η) = B(η) = rL²";
    AuxBVerticalDerivative => "aux-b-vertical-derivative", Scalar,
        "(D°_γY B)(X) = A(X,Y) + rħ(X,Y)";
    HCurvatureScalarForm => "h-curvature-scalar-form", Scalar,
        "R°(X,Y)Z = 𝔄_{X,Y}{[rħ(X,Z) + A(X,Z)]φ(Y) − B(X)[L⁻²ħ(Y,Z)η + L⁻¹ℓ(Y)φ(Z)]}";
    VhTorsionScalarForm => "vh-torsion-scalar-form", Scalar,
        "R̂(X,Y) = B(X)φ(Y) − B(Y)φ(X)";
    HvDerivativeScalarForm => "hv-derivative-scalar-form", Scalar,
        "(D°_βη 𝐏°)(Y,X,W,Z) = ⅔Lℓ(Z)[Σ ħ⊗D°_γr + 3rT](X,Y,W) − ⅓[ħ(Y,Z)M(X,W) + ħ(X,Z)M(Y,W) + ħ(W,Z)M(X,Y)]";
    HvDerivativeScalarFormEta => "hv-derivative-scalar-form-eta", Scalar,
        "(D°_βη 𝐏°)(Y,X,W,η) = ⅔L²[Σ ħ⊗D°_γr + 3rT](X,Y,W)";

    CReducibleProportionality => "c-reducible-proportionality", CReducible,
        "L(∇_γX C)(W) + ℓ(X)C(W) + ℓ(W)C(X) = αħ(X,W)";
    CReducibleVerticalC => "c-reducible-vertical-c", CReducible,
        "(∇_γX C)(W) = (D°_γX C)(W) − (C²ħ(X,W) + 2C(X)C(W))/(n+1)";
    CReduciblePsi => "c-reducible-psi", CReducible,
        "ℓ(X)C(W) + ℓ(W)C(X) + L[(D°_γX C)(W) − 2C(X)C(W)/(n+1)] = ψħ(X,W), ψ = LC²/(n+1) + α";

    LandsbergHorizontalSymmetry => "landsberg-horizontal-symmetry", Landsberg,
        "(∇_βZ T)(X,Y,W) is totally symmetric";
    LandsbergHorizontalCSymmetry => "landsberg-horizontal-c-symmetry", Landsberg,
        "(∇_βZ C)(W) = (∇_βW C)(Z)";
    CartanVCurvatureParallel => "cartan-v-curvature-parallel", Landsberg,
        "∇_βS = 0";

    LandsbergCartanForm => "landsberg-cartan-form", LandsbergScalar,
        "T(X,Y,W) = −(3r)⁻¹[ħ(X,W)D°_γY r + ħ(Y,W)D°_γX r + ħ(X,Y)D°_γW r]";
    LandsbergRGradient => "landsberg-r-gradient", LandsbergScalar,
        "D°_γX r = −3r C(X)/(n+1)";

    CHorizontalProportionality => "c-horizontal-proportionality", LandsbergCReducible,
        "∇_βW C̄ = μφ(W)";
    DimensionContraction => "dimension-contraction", LandsbergCReducible,
        "(n−2)μC = 0";

    BerwaldCQuadratic => "berwald-c-quadratic", BerwaldScalar,
        "ℓ(X)C(W) + ℓ(W)C(X) + L[(D°_γX C)(W) − 3C(X)C(W)/(n+1)] = 0";
    RiemannianEndState => "riemannian-end-state", BerwaldScalar,
        "C = 0 and T = 0";
    RVerticallyParallel => "r-vertically-parallel", BerwaldScalar,
        "D°_γr = 0";
    VhTorsionConstantForm => "vh-torsion-constant-form", BerwaldScalar,
        "R̂(X,Y) = rL{ℓ(X)Y − ℓ(Y)X}";
    RHorizontalGradientRadial => "r-horizontal-gradient-radial", BerwaldScalar,
        "D°_βX r = L⁻¹(D°_βη r)ℓ(X)";
    RHorizontallyParallel => "r-horizontally-parallel", BerwaldScalar,
        "D°_βr = 0";
}

impl IdentityId {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|id| id.name() == name)
    }
}

impl Serialize for IdentityId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}
