"""JSON Schemas for the result documents, keyed by schema id."""

SCHEMA_VERSION = 1

_number = {"type": "number"}
_nullable_number = {"type": ["number", "null"]}
_count = {"type": "integer", "minimum": 0}

A_MEASURE = {
    "type": "object",
    "required": ["a_hat", "a_scaled", "significance", "m", "n"],
    "properties": {
        "a_hat": {"type": "number", "minimum": 0, "maximum": 1},
        "a_scaled": {"type": "number", "minimum": 0.5, "maximum": 1},
        "significance": {"enum": ["Small", "Medium", "Large"]},
        "m": {"type": "integer", "minimum": 1},
        "n": {"type": "integer", "minimum": 1},
        "greater": _count,
        "ties": _count,
    },
}

BOXPLOT = {
    "type": "object",
    "required": ["median", "q1", "q3", "whisker_low", "whisker_high", "outliers"],
    "properties": {
        "median": _number,
        "q1": _number,
        "q3": _number,
        "whisker_low": _number,
        "whisker_high": _number,
        "outliers": {"type": "array", "items": _number},
    },
}

_ENVELOPE_REQUIRED = ["schema", "schema_version", "analysis", "master_seed", "config_hash", "result"]


def _envelope(analysis: str, result: dict) -> dict:
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "required": _ENVELOPE_REQUIRED,
        "properties": {
            "schema": {"const": f"absa/{analysis}/v{SCHEMA_VERSION}"},
            "schema_version": {"const": SCHEMA_VERSION},
            "analysis": {"const": analysis},
            "master_seed": {"type": "integer", "minimum": 0},
            "config_hash": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
            "thresholds": {
                "type": "object",
                "required": ["small", "medium", "large"],
            },
            "result": result,
        },
    }


CONSISTENCY = _envelope(
    "consistency",
    {
        "type": "object",
        "required": ["sizes", "outputs", "threshold", "total_runs", "n_star", "n_star_overall", "max_scaled_a", "groups"],
        "properties": {
            "sizes": {"type": "array", "items": {"type": "integer", "minimum": 1}},
            "outputs": {"type": "array", "items": {"type": "string"}},
            "threshold": _number,
            "total_runs": _count,
            "n_star": {"type": "object", "additionalProperties": {"type": ["integer", "null"]}},
            "n_star_overall": {"type": ["integer", "null"]},
            "n_star_reached": {"type": "boolean"},
            "max_scaled_a": {"type": "object", "additionalProperties": {"type": "array", "items": _number}},
            "groups": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["size", "output", "max_scaled_a", "comparisons"],
                    "properties": {"comparisons": {"type": "array", "items": A_MEASURE}},
                },
            },
        },
    },
)

ROBUSTNESS = _envelope(
    "robustness",
    {
        "type": "object",
        "required": ["n_star_used", "total_distributions", "outputs", "parameters"],
        "properties": {
            "n_star_used": {"type": "integer", "minimum": 1},
            "total_distributions": {"type": "integer", "minimum": 1},
            "parameters": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["name", "min", "max", "calibrated", "values", "entries"],
                    "properties": {
                        "entries": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["parameter", "value", "a_measure", "boxplot"],
                                "properties": {
                                    "a_measure": {"type": "object", "additionalProperties": A_MEASURE},
                                    "boxplot": {"type": "object", "additionalProperties": BOXPLOT},
                                },
                            },
                        }
                    },
                },
            },
        },
    },
)

LHS = _envelope(
    "lhs",
    {
        "type": "object",
        "required": ["N", "q", "n_star", "criterion", "points", "correlations", "degenerate_pairs"],
        "properties": {
            "N": {"type": "integer", "minimum": 1},
            "q": {"type": "integer", "minimum": 1},
            "n_star": {"type": "integer", "minimum": 1},
            "criterion": {"enum": ["none", "maximin"]},
            "min_distance": _nullable_number,
            "points": {"type": "array"},
            "correlations": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["parameter", "output", "r", "descriptor"],
                    "properties": {
                        "r": {"type": ["number", "null"], "minimum": -1, "maximum": 1},
                        "descriptor": {"type": ["string", "null"]},
                    },
                },
            },
        },
    },
)

DEMO = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "schema_version", "analysis", "master_seed", "config_hash", "result"],
    "properties": {
        "schema": {"const": f"absa/demo/v{SCHEMA_VERSION}"},
        "schema_version": {"const": SCHEMA_VERSION},
        "result": {
            "type": "object",
            "required": ["n_star_found", "n_star_used", "correlations", "sign_checks"],
        },
    },
}

SCHEMAS = {
    f"absa/consistency/v{SCHEMA_VERSION}": CONSISTENCY,
    f"absa/robustness/v{SCHEMA_VERSION}": ROBUSTNESS,
    f"absa/lhs/v{SCHEMA_VERSION}": LHS,
    f"absa/demo/v{SCHEMA_VERSION}": DEMO,
}


def validate(document: dict) -> None:
    """Validate a result document against the schema it names; raises on failure."""
    import jsonschema

    schema = SCHEMAS[document["schema"]]
    jsonschema.validate(document, schema)
