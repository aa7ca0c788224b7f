// Wire types mirroring the model service's JSON API, plus a validator for
// the what-if report schema used by session export.

export interface FeatureMeta {
  name: string;
  kind: "binary" | "continuous";
  min: number;
  max: number;
}

export interface ModelMeta {
  model_id: string;
  name: string;
  created_at: string;
  model_kind: string;
  outcome: { name: string; kind: "binary" | "continuous" };
  class_of_interest: number | null;
  parents: string[];
  features: FeatureMeta[];
  n_train: number;
  warnings: string[];
}

export interface ReportEntry {
  feature: string;
  control: number;
  treated: number;
  cde: number;
  rank: number;
}

export interface WhatIfReport {
  schema_version: number;
  instance: Record<string, number>;
  prediction: number;
  class_of_interest: number | null;
  entries: ReportEntry[];
  parents: string[];
  warnings: string[];
  excluded: string[];
  exceedance: { threshold: number; probability: number } | null;
  model_ref: string;
}

export interface InterventionResponse {
  new_prediction: number;
  report: WhatIfReport;
}

const isNumber = (v: unknown): v is number =>
  typeof v === "number" && Number.isFinite(v);

/** Validate an untrusted object against the what-if report schema.
 *  Returns a list of problems; empty means valid. */
export function validateWhatIfReport(obj: unknown): string[] {
  const problems: string[] = [];
  if (typeof obj !== "object" || obj === null) {
    return ["report is not an object"];
  }
  const r = obj as Record<string, unknown>;
  if (r.schema_version !== 1) problems.push("schema_version must be 1");
  if (typeof r.instance !== "object" || r.instance === null) {
    problems.push("instance must be an object");
  } else {
    for (const [k, v] of Object.entries(r.instance)) {
      if (!isNumber(v)) problems.push(`instance.${k} is not a number`);
    }
  }
  if (!isNumber(r.prediction)) problems.push("prediction is not a number");
  if (r.class_of_interest !== null && !isNumber(r.class_of_interest)) {
    problems.push("class_of_interest must be a number or null");
  }
  if (!Array.isArray(r.entries)) {
    problems.push("entries must be an array");
  } else {
    r.entries.forEach((e, i) => {
      if (typeof e !== "object" || e === null) {
        problems.push(`entries[${i}] is not an object`);
        return;
      }
      const entry = e as Record<string, unknown>;
      if (typeof entry.feature !== "string") problems.push(`entries[${i}].feature`);
      for (const field of ["control", "treated", "cde"]) {
        if (!isNumber(entry[field])) problems.push(`entries[${i}].${field}`);
      }
      if (!Number.isInteger(entry.rank) || (entry.rank as number) < 1) {
        problems.push(`entries[${i}].rank must be a positive integer`);
      }
    });
    const ranks = (r.entries as ReportEntry[]).map((e) => e.rank);
    if (new Set(ranks).size !== ranks.length) {
      problems.push("entry ranks must be unique");
    }
  }
  if (!Array.isArray(r.parents)) problems.push("parents must be an array");
  if (!Array.isArray(r.warnings)) problems.push("warnings must be an array");
  return problems;
}
