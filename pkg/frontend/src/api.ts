// Thin typed fetch layer over the model service. Every call is recorded in
// the request log so tests can assert the UI performs no local model math:
// each displayed number must trace back to a logged response.

import type { InterventionResponse, ModelMeta, WhatIfReport } from "./schema.js";

export interface LoggedCall {
  method: string;
  url: string;
  body: unknown;
  response: unknown;
}

export class ApiClient {
  readonly baseUrl: string;
  readonly log: LoggedCall[] = [];

  constructor(baseUrl = "http://127.0.0.1:8765") {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const url = `${this.baseUrl}${path}`;
    const resp = await fetch(url, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await resp.json();
    this.log.push({ method, url, body: body ?? null, response: payload });
    if (!resp.ok) {
      const detail = (payload as { detail?: string }).detail ?? resp.statusText;
      throw new Error(`${method} ${path} failed (${resp.status}): ${detail}`);
    }
    return payload as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/api/health");
  }

  async listModels(): Promise<ModelMeta[]> {
    const payload = await this.request<{ models: ModelMeta[] }>("GET", "/api/models");
    return payload.models;
  }

  getModel(modelId: string): Promise<ModelMeta> {
    return this.request("GET", `/api/models/${encodeURIComponent(modelId)}`);
  }

  registerFixture(
    fixtureId: string,
    modelSpec: Record<string, unknown>,
  ): Promise<{ model_id: string; parents: string[]; warnings: string[] }> {
    return this.request("POST", "/api/models", {
      fixture_id: fixtureId,
      model_spec: modelSpec,
    });
  }

  whatif(
    modelId: string,
    instance: Record<string, number>,
    k: number,
    delta: number,
  ): Promise<WhatIfReport> {
    return this.request("POST", `/api/models/${encodeURIComponent(modelId)}/whatif`, {
      instance,
      k,
      delta,
    });
  }

  intervene(
    modelId: string,
    instance: Record<string, number>,
    feature: string,
    newValue: number,
    k: number,
    delta: number,
  ): Promise<InterventionResponse> {
    return this.request("POST", `/api/models/${encodeURIComponent(modelId)}/intervene`, {
      instance,
      feature,
      new_value: newValue,
      k,
      delta,
    });
  }
}
