/** Clip tokens to `radius` words on either side of the target, returning the
 * window and the target's new index. Mirrors the workbench reader's
 * windowing contract exactly so extracted embeddings line up with it. */
export function contextWindow(
  tokens: string[],
  targetIndex: number,
  radius = 10,
): { window: string[]; targetIndex: number } {
  if (targetIndex < 0 || targetIndex >= tokens.length) {
    throw new RangeError(`target_index ${targetIndex} outside 0..${tokens.length - 1}`);
  }
  if (radius < 0) {
    throw new RangeError(`radius must be >= 0, got ${radius}`);
  }
  const lo = Math.max(0, targetIndex - radius);
  const hi = Math.min(tokens.length, targetIndex + radius + 1);
  return { window: tokens.slice(lo, hi), targetIndex: targetIndex - lo };
}
