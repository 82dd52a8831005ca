#!/usr/bin/env python3
"""Regenerates the credit-scoring sample assessment, its datasets and the
single-mutation variants under corpus/.

The committed files are the source of truth for the golden tests; rerun this
only when the document schema or the sample content changes, then refresh the
golden reports (see corpus/golden/README note in the project README).
"""

import copy
import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"

LEVELS = {
    "FN": ("high", "Credit approval controls access to an essential financial service and affects personal rights directly."),
    "AC": ("medium", "Loan officers confirm every automated recommendation; the system influences but does not replace their decisions."),
    "TR": ("medium", "Applicants can demand reasons for a rejection; missing explanations raise handling cost but violate no statute by themselves."),
    "RE": ("high", "A wrong approval or rejection causes major financial damage to the bank or the applicant."),
    "S": ("medium", "The assistant cannot injure anyone; manipulated scores could cause high financial damage."),
    "DP": ("high", "Applications carry account, employment and address data whose disclosure would have economic consequences."),
}

PROFILE = {
    "PF-T-FA-01": "The assistant scores consumer credit applications. Input: a structured application record (income, liabilities, employment history, requested amount, repayment term). Output: an approval recommendation in {approve, decline} with a confidence score in [0,1].",
    "PF-T-FA-02": "The assistant runs inside the bank's loan-origination workflow. It receives application records from the case-management system and returns its recommendation to the loan officer's review screen; officers confirm or override every recommendation.",
    "PF-T-FA-03": "Consumer-credit regulation requires documented, non-discriminatory decision criteria and the ability to explain rejections on request. The business case requires a median scoring latency below two seconds.",
    "PF-T-FA-04": "The model is conceivable for small-business lending but was not trained for it; use outside consumer credit in the domestic market is out of scope, as is any fully automated decision without officer review.",
    "PF-T-FA-05": "Scores are advisory; the bank's four-eyes principle applies to every declined application above the review threshold.",
    "PF-T-ST-01": "Components: a gradient-boosted tree ensemble (the AI component), a feature-preparation service, the scoring API, and the review UI. The case-management system calls the scoring API, which runs feature preparation and the model and returns the recommendation with the confidence score.",
    "PF-T-ST-02": "The AI component is a gradient-boosted decision-tree ensemble over 34 engineered features. It does not learn in operation; retraining is an offline, release-managed process run quarterly.",
    "PF-T-ST-03": "Feature preparation and model weights are versioned together; each scoring response carries the model version for audit purposes.",
}

# Narratives for items where the generic template would read poorly.
SPECIAL_NARRATIVES = {
    "FN-R-FN-RI-01": "Applicant gender, age band and residence district are present in the data. Gender and age are the sensitive attributes with plausible disadvantage; residence district acts as a proxy for ethnic origin and is treated as sensitive as well.",
    "FN-R-FN-RI-02": "Fairness here means approval decisions independent of gender and of the district proxy at comparable creditworthiness. Differentiation by verified income and liabilities is appropriate; differentiation by gender, age band or district is unjustified.",
    "FN-R-FN-CR-01": "Group fairness is assessed as statistical parity difference and equal opportunity difference between female and male applicants on the evaluation set, each with target at most 0.10.",
    "FN-R-FN-CR-02": "Training-data bias is bounded by the statistical parity difference of recorded outcomes between female and male applicants, target at most 0.12.",
    "RE-R-SC-RI-01": "Application domain: complete domestic consumer-credit applications with verified income data, amounts 1k-80k, terms 6-96 months. Out of domain: business loans, foreign-currency loans, records with unverifiable income. Wrong recommendations cause financial damage on both sides; the tolerable residual risk is bounded by the officer review step.",
    "RE-R-SC-CR-01": "Accuracy (target at least 0.80) and F1 (target at least 0.75) on the held-out evaluation set are the primary reliability metrics; the training loss is binary cross-entropy.",
    "RE-R-RO-CR-02": "Specificity under boundary perturbations must stay at or above 0.70 so that noisy records do not inflate approvals.",
    "RE-R-UE-CR-01": "The confidence output is evaluated with expected calibration error (10 bins, target at most 0.10), Brier score (target at most 0.15) and negative log-likelihood (target at most 0.55) on the evaluation set.",
    "TR-R-UA-RI-01": "Applicants cannot see model internals; officers need enough insight to catch implausible recommendations. Target: every rejection explainable to the applicant in terms of the top contributing features.",
    "AT": "Residual risks were weighed across dimensions; the transparency residual is accepted in favor of security, see the trade-off record and sign-off.",
}

NA_RESPONSES = {
    "DP-R-PD-ME-08": "Training runs on a single secured site; no federated or distributed learning is used.",
    "DP-R-BI-ME-09": "Model weights never leave the bank's infrastructure, so watermark signatures add nothing.",
    "RE-R-UE-ME-01": "No uncertainty-annotated ground truth exists for credit outcomes; label noise is handled via the calibration measures instead.",
    "TR-R-EX-ME-05": "A single explanation method (per-feature contributions) is used, so the combined-fulfillment check does not apply.",
}

BY_REFERENCE = {
    "DP-R-BI-ME-03": "DP-R-PD-ME-01",
    "DP-R-BI-ME-04": "DP-R-PD-ME-02",
}

BINDINGS = {
    "FN-R-FN-CR-01": [
        {"metric": "statistical_parity_difference", "dataset": "eval",
         "params": {"group_a": "female", "group_b": "male"},
         "target": {"min": 0, "max": 0.1, "min_closed": True, "max_closed": True}},
        {"metric": "equal_opportunity_difference", "dataset": "eval",
         "params": {"group_a": "female", "group_b": "male"},
         "target": {"min": 0, "max": 0.1, "min_closed": True, "max_closed": True}},
    ],
    "FN-R-FN-CR-02": [
        {"metric": "statistical_parity_difference", "dataset": "train",
         "params": {"group_a": "female", "group_b": "male"},
         "target": {"min": 0, "max": 0.12, "min_closed": True, "max_closed": True}},
    ],
    "RE-R-SC-CR-01": [
        {"metric": "accuracy", "dataset": "eval",
         "target": {"min": 0.8, "max": 1, "min_closed": True, "max_closed": True}},
        {"metric": "f1", "dataset": "eval",
         "target": {"min": 0.75, "max": 1, "min_closed": True, "max_closed": True}},
    ],
    "RE-R-RO-CR-02": [
        {"metric": "specificity", "dataset": "eval",
         "target": {"min": 0.7, "max": 1, "min_closed": True, "max_closed": True}},
    ],
    "RE-R-UE-CR-01": [
        {"metric": "ece", "dataset": "eval", "params": {"bins": "10"},
         "target": {"min": 0, "max": 0.1, "min_closed": True, "max_closed": True}},
        {"metric": "brier", "dataset": "eval",
         "target": {"min": 0, "max": 0.15, "min_closed": True, "max_closed": True}},
        {"metric": "nll", "dataset": "eval",
         "target": {"min": 0, "max": 0.55, "min_closed": True, "max_closed": True}},
    ],
}

EX_DEVIATION = ("Explanation stability under small input perturbations reaches 0.87 "
                "against a target of 0.90 for rare applicant segments.")

SUMMARIES = {
    "FN": ("negligible", "Parity and opportunity gaps sit inside their targets on evaluation and training data; monitoring keeps them visible in operation. Residual fairness risk is negligible."),
    "AC": ("negligible", "Officers confirm every recommendation, complaint channels exist and shutdown paths are rehearsed. Residual autonomy risk is negligible."),
    "TR": ("non_negligible_acceptable", "User-facing explanations meet their criteria. For experts, one criterion is only partially met: " + EX_DEVIATION + " The residual is non-negligible but acceptable given the security trade-off recorded for this assessment."),
    "RE": ("negligible", "Accuracy, F1, robustness and calibration metrics are inside their target intervals and drift monitoring is in place; residual reliability risk is negligible."),
    "S": ("negligible", "Detection and mitigation paths are tested, access is role-restricted and emergency management is established. Residual safety and security risk is negligible."),
    "DP": ("negligible", "Personal data is minimized, aggregated and access-controlled; model extraction is limited by output shaping and query limits. Residual data-protection risk is negligible."),
}

TEMPLATES = {
    "protection_analysis": "Protection requirement set to {level} for this dimension. {why}",
    "risk_analysis": "Risks for this area were analyzed for the credit-approval context; objectives recorded in the assessment dossier, section {sec}.",
    "criterion": "Criteria and target characteristics for this area are defined in dossier section {sec} and justified against the objectives.",
    "measure": "Measure implemented as described in dossier section {sec}; effectiveness reviewed with the named evidence.",
    "overall_assessment": "Measures and test results reviewed against the criteria of this area; result recorded in dossier section {sec}.",
    "summary": "Residual risks of this dimension are summarized in dossier section {sec}.",
    "cross_dimensional": "Cross-dimensional weighing recorded in dossier section {sec}.",
}


def load_catalog():
    with open(ROOT / "data" / "catalog.json") as f:
        return json.load(f)


def iter_items(cat):
    for it in cat["profile"]:
        yield it, None, None
    for dim in cat["dimensions"]:
        yield dim["protection_item"], dim, None
        for ra in dim["risk_areas"]:
            for it in ra["items"]:
                yield it, dim, ra
        yield dim["summary"], dim, None
    yield cat["at"], None, None


def make_response(item, dim, section_no):
    rid = item["id"]
    if rid in NA_RESPONSES:
        return {"id": rid, "status": "not_applicable", "justification": NA_RESPONSES[rid],
                "narrative": ""}
    if rid in BY_REFERENCE:
        return {"id": rid, "status": "by_reference", "target": BY_REFERENCE[rid],
                "narrative": "Covered by the referenced personal-data measure."}

    if rid in SPECIAL_NARRATIVES:
        narrative = SPECIAL_NARRATIVES[rid]
    elif item["kind"] == "protection_analysis":
        level, why = LEVELS[dim["code"]]
        narrative = TEMPLATES["protection_analysis"].format(level=level, why=why)
    else:
        narrative = TEMPLATES[item["kind"]].format(sec=section_no)

    resp = {"id": rid, "status": "addressed", "narrative": narrative}
    evidence = []
    for req in item.get("requirements", []):
        kind = req.rstrip("?")
        evidence.append({
            "kind": kind,
            "locator": f"dossier/{rid}.{kind.lower()}.md",
            "description": {"Do": "documentation", "Te": "test report", "Pr": "process description"}[kind],
        })
    if evidence:
        resp["evidence"] = evidence
    if rid in BINDINGS:
        resp["bindings"] = BINDINGS[rid]
    return resp


def spd(rows, a, b):
    def rate(g):
        sel = [r for r in rows if r[0] == g]
        return sum(1 for r in sel if r[2] == 1) / len(sel)
    return abs(rate(a) - rate(b))


def tpr_gap(rows, a, b):
    def tpr(g):
        sel = [r for r in rows if r[0] == g and r[1] == 1]
        return sum(1 for r in sel if r[2] == 1) / len(sel)
    return abs(tpr(a) - tpr(b))


def gen_eval(seed):
    rng = random.Random(seed)
    rows = []
    for i in range(48):
        group = "female" if i % 2 == 0 else "male"
        score = round(rng.uniform(0.05, 0.95), 2)
        y_true = 1 if rng.random() < score else 0
        y_pred = 1 if score >= 0.5 else 0
        rows.append((group, y_true, y_pred, score))
    return rows


def gen_train(seed):
    rng = random.Random(seed)
    rows = []
    for i in range(72):
        group = "female" if i % 2 == 0 else "male"
        y_true = 1 if rng.random() < 0.55 else 0
        y_pred = y_true if rng.random() < 0.9 else 1 - y_true
        rows.append((group, y_true, y_pred, None))
    return rows


def metrics_ok(rows):
    n = len(rows)
    acc = sum(1 for r in rows if r[1] == r[2]) / n
    tp = sum(1 for r in rows if r[1] == 1 and r[2] == 1)
    fp = sum(1 for r in rows if r[1] == 0 and r[2] == 1)
    fn = sum(1 for r in rows if r[1] == 1 and r[2] == 0)
    tn = n - tp - fp - fn
    prec = tp / (tp + fp)
    rec = tp / (tp + fn)
    f1 = 2 * prec * rec / (prec + rec)
    spec = tn / (tn + fp)
    brier = sum((r[3] - r[1]) ** 2 for r in rows) / n
    import math
    nll = -sum(math.log(r[3]) if r[1] == 1 else math.log(1 - r[3]) for r in rows) / n
    bins = [[0, 0.0, 0.0] for _ in range(10)]
    for r in rows:
        b = min(int(r[3] * 10), 9)
        bins[b][0] += 1
        bins[b][1] += r[3]
        bins[b][2] += r[1]
    ece = sum((c / n) * abs(cs / c - hs / c) for c, cs, hs in bins if c)
    checks = {
        "spd": spd(rows, "female", "male") <= 0.1,
        "eod": tpr_gap(rows, "female", "male") <= 0.1,
        "acc": acc >= 0.8, "f1": f1 >= 0.75, "spec": spec >= 0.7,
        "ece": ece <= 0.1, "brier": brier <= 0.15, "nll": nll <= 0.55,
    }
    return checks


def build_document(cat):
    doc = {
        "meta": {
            "name": "credit-approval assistant",
            "version": "1.3.0",
            "assessor": "R. Vogel",
            "date": "2024-04-12",
        },
        "profile": PROFILE,
        "protection": {code: {"level": lv, "justification": just}
                       for code, (lv, just) in LEVELS.items()},
        "responses": [],
        "overall": [],
        "summaries": [],
        "tradeoffs": [{
            "dimension_a": "TR", "dimension_b": "S", "prioritized": "S",
            "justification": "Detailed model internals are withheld to limit extraction and "
                             "manipulation risk; explanation depth for experts is capped accordingly.",
        }],
        "signoff": {
            "signer": "M. Keller, AI risk board",
            "date": "2024-04-26",
            "statement": "The remaining transparency residual is accepted per the recorded trade-off.",
        },
    }

    section = 0
    for item, dim, ra in iter_items(cat):
        section += 1
        if item["kind"] == "profile_question":
            continue  # answered via the profile map
        doc["responses"].append(make_response(item, dim, section))

    for dim in cat["dimensions"]:
        for ra in dim["risk_areas"]:
            criteria = {}
            for it in ra["items"]:
                if it["kind"] == "criterion":
                    criteria[it["id"]] = "met"
            oa = {
                "dimension": dim["code"],
                "area": ra["code"],
                "criteria": criteria,
                "deviations": [],
                "conclusion": "Criteria of this risk area are met by the documented measures.",
            }
            if dim["code"] == "TR" and ra["code"] == "EX":
                oa["criteria"]["TR-R-EX-CR-02"] = "partially_met"
                oa["deviations"] = [EX_DEVIATION]
                oa["conclusion"] = ("Criteria largely met; the stability criterion for expert "
                                    "explanations is partially met, deviation recorded.")
            doc["overall"].append(oa)
        cls, rationale = SUMMARIES[dim["code"]]
        doc["summaries"].append({
            "dimension": dim["code"],
            "residual_class": cls,
            "rationale": rationale,
            "cross_dimension_effects": ["S"] if dim["code"] == "TR" else [],
        })
    return doc


def write_json(path, obj):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(obj, f, indent=2, ensure_ascii=False)
        f.write("\n")


def write_csv(path, rows, with_score):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        f.write("group,y_true,y_pred,score\n" if with_score else "group,y_true,y_pred\n")
        for r in rows:
            if with_score:
                f.write(f"{r[0]},{r[1]},{r[2]},{r[3]}\n")
            else:
                f.write(f"{r[0]},{r[1]},{r[2]}\n")


def find_response(doc, rid):
    for r in doc["responses"]:
        if r["id"] == rid:
            return r
    raise KeyError(rid)


def make_mutations(base):
    muts = {}

    m = copy.deepcopy(base)
    m["responses"] = [r for r in m["responses"] if r["id"] != "FN-R-FN-ME-05"]
    muts["01-required-item-missing"] = m

    m = copy.deepcopy(base)
    r = find_response(m, "FN-R-FN-ME-05")
    r["evidence"] = [e for e in r["evidence"] if e["kind"] != "Te"]
    muts["02-evidence-type-missing"] = m

    m = copy.deepcopy(base)
    r = find_response(m, "TR-R-EX-ME-07")
    r["evidence"] = [e for e in r["evidence"] if e["kind"] != "Te"]
    muts["03-conditional-evidence-absent"] = m

    m = copy.deepcopy(base)
    find_response(m, "DP-R-BI-ME-03")["target"] = "DP-R-PD-ME-08"  # a not-applicable item
    muts["04-dangling-reference"] = m

    m = copy.deepcopy(base)
    m["responses"].append({"id": "FN-R-FN-ME-09", "status": "addressed",
                           "narrative": "An extra measure the catalog does not know."})
    muts["05-unknown-item"] = m

    m = copy.deepcopy(base)
    r = find_response(m, "RE-R-RO-CR-02")
    r["narrative"] = ""
    r.pop("bindings", None)
    muts["06-criterion-unbound"] = m

    m = copy.deepcopy(base)
    r = find_response(m, "FN-R-FN-CR-01")
    r["bindings"] = copy.deepcopy(r["bindings"])
    # the equal-opportunity gap of the shipped eval set is ~0.033, so this
    # target is unreachable while the overall assessment still claims met
    r["bindings"][1]["target"] = {"min": 0, "max": 0.001, "min_closed": True, "max_closed": True}
    muts["07-metric-outside-target"] = m

    m = copy.deepcopy(base)
    for oa in m["overall"]:
        if oa["dimension"] == "TR" and oa["area"] == "EX":
            oa["deviations"] = []
    muts["08-deviation-unrecorded"] = m

    m = copy.deepcopy(base)
    m["summaries"] = [s for s in m["summaries"] if s["dimension"] != "DP"]
    muts["09-summary-missing"] = m

    m = copy.deepcopy(base)
    find_response(m, "DP-R-PD-ME-08")["justification"] = ""
    muts["10-not-applicable-unjustified"] = m

    m = copy.deepcopy(base)
    for s in m["summaries"]:
        if s["dimension"] == "DP":
            s["residual_class"] = "unacceptable"
            s["rationale"] = ("Re-identification risk from the district attribute cannot be "
                              "bounded with the current aggregation; unacceptable until fixed.")
    muts["11-verdict-unacceptable-residual"] = m

    m = copy.deepcopy(base)
    m["tradeoffs"] = []
    muts["12-verdict-uncovered-residual"] = m

    return muts


def main():
    cat = load_catalog()

    eval_rows = None
    for seed in range(1000):
        candidate = gen_eval(seed)
        # the 07 mutation needs a strictly positive equal-opportunity gap
        if all(metrics_ok(candidate).values()) and tpr_gap(candidate, "female", "male") > 0.01:
            eval_rows = candidate
            print(f"eval dataset seed {seed}")
            break
    assert eval_rows, "no evaluation dataset satisfies the targets"

    train_rows = None
    for seed in range(1000):
        candidate = gen_train(seed)
        if spd(candidate, "female", "male") <= 0.12:
            train_rows = candidate
            print(f"train dataset seed {seed}")
            break
    assert train_rows

    write_csv(CORPUS / "data" / "eval.csv", eval_rows, with_score=True)
    write_csv(CORPUS / "data" / "train.csv", train_rows, with_score=False)

    doc = build_document(cat)
    write_json(CORPUS / "credit-scoring.assessment.json", doc)

    for name, mut in make_mutations(doc).items():
        write_json(CORPUS / "mutations" / f"{name}.json", mut)
    print("corpus written")


if __name__ == "__main__":
    main()
