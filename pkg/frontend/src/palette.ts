// Palette selection. The colorblind-safe palette is the default; switching
// palettes recolors categories without touching card identity.

import type { PackMeta } from "./types.js";

export const DEFAULT_PALETTE = "high-contrast";
const STORAGE_KEY = "cybercards.palette";

export function availablePalettes(pack: PackMeta): string[] {
  return pack.palettes.map((p) => p.name);
}

export function loadPaletteName(pack: PackMeta): string {
  try {
    const saved = globalThis.localStorage?.getItem(STORAGE_KEY);
    if (saved && pack.palettes.some((p) => p.name === saved)) return saved;
  } catch {
    // storage unavailable (tests, privacy mode); fall through
  }
  return pack.palettes.some((p) => p.name === DEFAULT_PALETTE)
    ? DEFAULT_PALETTE
    : pack.palettes[0]?.name ?? DEFAULT_PALETTE;
}

export function savePaletteName(name: string): void {
  try {
    globalThis.localStorage?.setItem(STORAGE_KEY, name);
  } catch {
    // best effort only
  }
}

export function nextPalette(pack: PackMeta, current: string): string {
  const names = availablePalettes(pack);
  const index = names.indexOf(current);
  return names[(index + 1) % names.length] ?? current;
}

export function categoryColor(pack: PackMeta, paletteName: string, categoryId: string | null): string {
  if (categoryId === null) return "#666666";
  const palette = pack.palettes.find((p) => p.name === paletteName) ?? pack.palettes[0];
  const slot = pack.categories.find((c) => c.id === categoryId)?.color ?? categoryId;
  return palette?.colors[slot] ?? "#666666";
}

export function categoryName(pack: PackMeta, categoryId: string | null): string {
  if (categoryId === null) return "—";
  return pack.categories.find((c) => c.id === categoryId)?.display_name ?? categoryId;
}
