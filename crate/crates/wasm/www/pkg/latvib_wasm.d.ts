/* tslint:disable */
/* eslint-disable */

/**
 * Rows `[x, λ₁, …, λ₃ₙ]` along the path, `x` counting segments.
 */
export function bands(spec: string, path: string, steps: number): Float64Array;

/**
 * Number of dispersion branches, `3n`.
 */
export function branch_count(spec: string): number;

/**
 * Spec text for a shipped lattice, `cubic` or `diamond`.
 */
export function builtin_lattice(name: string): string | undefined;

/**
 * Rows `[T, C, C_debye, C_einstein]` over log-spaced temperatures in natural
 * units, with the Einstein level at the Debye `λ_D`.
 */
export function heat(spec: string, grid: number, tmin: number, tmax: number, steps: number): Float64Array;

/**
 * Rows `[λ, φ(λ), c₀λ^{3/2}]` on an evenly spaced threshold grid.
 */
export function ids(spec: string, grid: number, points: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly bands: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly branch_count: (a: number, b: number) => [number, number, number];
    readonly builtin_lattice: (a: number, b: number) => [number, number];
    readonly heat: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly ids: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
