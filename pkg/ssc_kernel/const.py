"""Constants for the SSC kernel."""

DOMAIN = "ssc_kernel"
DEFAULT_NAME = "SSC Kernel"
FILE_EXTENSION = ".ssc"

# Generator defaults
DEFAULT_SEED = 0
DEFAULT_DEPTH = 4
MAX_DEPTH = 5
DEFAULT_MAX_LEVEL = 2
DEFAULT_TEL = 3
MAX_TEL = 3
DEFAULT_COUNT = 200
MINIM_COUNT = 100
TERMIFY_COUNT = 10
TERMIFY_CONST = "const"
TERMIFY_WEAKENING = "weakening"
TERMIFY_DEPENDENT = "dependent"
TERMIFY_MODES = [TERMIFY_CONST, TERMIFY_WEAKENING, TERMIFY_DEPENDENT]
WRAPPER_PROBABILITY = 0.4
GEN_RETRIES = 20

# Lifting lemma sampling
LIFT_HYPOTHESIS_SAMPLES = 50
LIFT_CONCLUSION_SAMPLES = 20

# Exit codes
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# Verdict strings
STATUS_OK = "ok"
STATUS_FAIL = "fail"
STATUS_ERROR = "error"

# CLI verbs
VERB_CHECK = "check"
VERB_NORMALIZE = "normalize"
VERB_CONV = "conv"
VERB_TRANSLATE = "translate"
VERB_ROUNDTRIP = "roundtrip"
VERB_VERIFY = "verify"
VERB_MINIM = "minim"
VERB_TERMIFY = "termify"

VERIFY_EQUATIONS = "equations"
VERIFY_LIFTED = "lifted"
VERIFY_CWF_LAWS = "cwf-laws"
VERIFY_TARGETS = [VERIFY_EQUATIONS, VERIFY_LIFTED, VERIFY_CWF_LAWS]

TRANSLATE_TO_CWF = "cwf"
TRANSLATE_TO_SSC = "ssc"

# Declaration kinds in .ssc files
KIND_CTX = "ctx"
KIND_TY = "ty"
KIND_TM = "tm"
KIND_SUB = "sub"
KIND_CHAIN = "chain"
DECL_KINDS = [KIND_CTX, KIND_TY, KIND_TM, KIND_SUB, KIND_CHAIN]

# Constructor weights used by the generator. Keys are constructor names.
DEFAULT_WEIGHTS = {
    "U": 2.0,
    "El": 1.0,
    "Pi": 2.0,
    "Sigma": 1.5,
    "Top": 1.0,
    "Lift": 1.5,
    "var": 3.0,
    "redex": 0.5,
}

# The eight substitution calculus equations
SSC_EQUATIONS = {
    "[p][+]ty": "B[p][γ⁺] = B[γ][p]",
    "[p][+]tm": "b[p][γ⁺] = b[γ][p]",
    "q[+]": "q[γ⁺] = q",
    "[p][<>]ty": "B[p][⟨a⟩] = B",
    "[p][<>]tm": "b[p][⟨a⟩] = b",
    "q[<>]": "q[⟨a⟩] = a",
    "[<>][]": "B[⟨a⟩][γ] = B[γ⁺][⟨a[γ]⟩]",
    "[p+][<q>]": "B[p⁺][⟨q⟩] = B",
}

# Substitution laws of the type and term formers
FORMER_LAWS = {
    "Pi[]": "(Π A B)[γ] = Π (A[γ]) (B[γ⁺])",
    "lam[]": "(lam b)[γ] = lam (b[γ⁺])",
    "app[]": "(t·a)[γ] = (t[γ])·(a[γ])",
    "U[]": "(U i)[γ] = U i",
    "El[]": "(El Â)[γ] = El (Â[γ])",
    "c[]": "(c A)[γ] = c (A[γ])",
    "Lift[]": "(Lift A)[γ] = Lift (A[γ])",
    "mk[]": "(mk a)[γ] = mk (a[γ])",
    "un[]": "(un a)[γ] = un (a[γ])",
    "Top[]": "⊤[γ] = ⊤",
    "tt[]": "tt[γ] = tt",
    "Sigma[]": "(Σ A B)[γ] = Σ (A[γ]) (B[γ⁺])",
    "pair[]": "(a,b)[γ] = (a[γ],b[γ])",
}

# Computation and uniqueness rules
BETA_ETA_LAWS = {
    "Pi-beta": "lam b · a = b[⟨a⟩]",
    "Pi-eta": "t = lam (t[p]·q)",
    "U-beta": "El (c A) = A",
    "U-eta": "c (El Â) = Â",
    "Lift-beta": "un (mk a) = a",
    "Lift-eta": "mk (un a) = a",
    "Top-eta": "t = tt",
    "Sigma-beta1": "fst (a,b) = a",
    "Sigma-beta2": "snd (a,b) = b",
    "Sigma-eta": "w = (fst w, snd w)",
}

LIFTED_EQUATIONS = [1, 2, 3, 4]

# CwF laws checked on the termified model
CWF_LAWS = [
    "comp-assoc",
    "comp-idl",
    "comp-idr",
    "eps-eta",
    "ty-id",
    "ty-comp",
    "tm-id",
    "tm-comp",
    "ext-beta1",
    "ext-beta2",
    "ext-eta",
    "Pi[]",
    "lam[]",
    "app[]",
    "U[]",
    "El[]",
    "c[]",
    "Lift[]",
    "mk[]",
    "un[]",
    "Top[]",
    "tt[]",
    "Sigma[]",
    "pair[]",
    "Pi-beta",
    "Pi-eta",
    "U-beta",
    "U-eta",
    "Lift-beta",
    "Lift-eta",
    "Top-eta",
    "Sigma-beta1",
    "Sigma-beta2",
    "Sigma-eta",
]
