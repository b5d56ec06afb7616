/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const bands: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const branch_count: (a: number, b: number) => [number, number, number];
export const builtin_lattice: (a: number, b: number) => [number, number];
export const heat: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const ids: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
