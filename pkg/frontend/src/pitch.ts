/** Freeze-frame pitch rendering in metric coordinates (105 x 68). The SVG
 * uses the backend's frame directly, so no client-side unit conversion. */

import type { FramePlayerDoc, Point, ShotDetail } from './types.js';

export const PITCH_LENGTH = 105;
export const PITCH_WIDTH = 68;
export const GOAL_CENTER: Point = { x: 105, y: 34 };
export const LOW_POST: Point = { x: 105, y: 30.34 };
export const HIGH_POST: Point = { x: 105, y: 37.66 };

const EPS = 1e-9;

/** Boundary-inclusive membership in the shot-to-posts triangle; mirrors the
 * backend convention (used for drawing and test audits, never for numbers
 * shown to the user, which come from the service). */
export function pointInShotTriangle(shot: Point, p: Point): boolean {
  const vertices: [Point, Point, Point] = [shot, LOW_POST, HIGH_POST];
  const area2 =
    (LOW_POST.x - shot.x) * (HIGH_POST.y - shot.y) -
    (LOW_POST.y - shot.y) * (HIGH_POST.x - shot.x);
  if (area2 === 0) {
    const lo = Math.min(shot.y, LOW_POST.y);
    const hi = Math.max(shot.y, HIGH_POST.y);
    return Math.abs(p.x - shot.x) <= EPS && p.y >= lo - EPS && p.y <= hi + EPS;
  }
  const orientation = area2 > 0 ? 1 : -1;
  for (let i = 0; i < 3; i += 1) {
    const a = vertices[i]!;
    const b = vertices[(i + 1) % 3]!;
    const length = Math.hypot(b.x - a.x, b.y - a.y);
    const cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if ((orientation * cross) / length < -EPS) return false;
  }
  return true;
}

export function playerRole(player: FramePlayerDoc): 'teammate' | 'opponent' | 'keeper' {
  if (!player.is_teammate && player.is_keeper) return 'keeper';
  return player.is_teammate ? 'teammate' : 'opponent';
}

export interface PitchRenderOptions {
  width?: number;
}

function fmt(value: number): string {
  return Number(value.toFixed(3)).toString();
}

/** Render the pitch as an SVG string. Markers carry data-role/data-x/data-y
 * attributes so tests (and tooltips) can audit the geometry. */
export function pitchSvg(shot: ShotDetail, options: PitchRenderOptions = {}): string {
  const width = options.width ?? 630;
  const scale = width / PITCH_LENGTH;
  const height = PITCH_WIDTH * scale;
  const sx = (x: number) => fmt(x * scale);
  const sy = (y: number) => fmt(y * scale);

  const parts: string[] = [];
  parts.push(
    `<svg class="pitch" viewBox="0 0 ${width} ${fmt(height)}" xmlns="http://www.w3.org/2000/svg">`,
  );
  parts.push(`<rect class="grass" x="0" y="0" width="${width}" height="${fmt(height)}"/>`);
  // halfway line and center circle
  parts.push(`<line class="line" x1="${sx(52.5)}" y1="0" x2="${sx(52.5)}" y2="${fmt(height)}"/>`);
  parts.push(`<circle class="line" cx="${sx(52.5)}" cy="${sy(34)}" r="${fmt(9.15 * scale)}"/>`);
  // penalty and goal areas at both ends (16.5 m and 5.5 m deep, centered)
  for (const [x0, depth] of [
    [0, 16.5],
    [PITCH_LENGTH - 16.5, 16.5],
  ] as const) {
    parts.push(
      `<rect class="line" x="${sx(x0)}" y="${sy(34 - 20.16)}" width="${fmt(depth * scale)}" height="${fmt(40.32 * scale)}"/>`,
    );
  }
  for (const [x0, depth] of [
    [0, 5.5],
    [PITCH_LENGTH - 5.5, 5.5],
  ] as const) {
    parts.push(
      `<rect class="line" x="${sx(x0)}" y="${sy(34 - 9.16)}" width="${fmt(depth * scale)}" height="${fmt(18.32 * scale)}"/>`,
    );
  }
  // goal mouth on the attacking end
  parts.push(
    `<line class="goal" x1="${sx(105)}" y1="${sy(LOW_POST.y)}" x2="${sx(105)}" y2="${sy(HIGH_POST.y)}"/>`,
  );

  if (shot.has_freeze_frame) {
    const triangle = [
      `${sx(shot.location.x)},${sy(shot.location.y)}`,
      `${sx(LOW_POST.x)},${sy(LOW_POST.y)}`,
      `${sx(HIGH_POST.x)},${sy(HIGH_POST.y)}`,
    ].join(' ');
    parts.push(`<polygon class="shot-triangle" points="${triangle}"/>`);

    for (const player of shot.freeze_frame) {
      const role = playerRole(player);
      parts.push(
        `<circle class="player ${role}" data-role="${role}" data-x="${fmt(player.x)}" data-y="${fmt(player.y)}" ` +
          `cx="${sx(player.x)}" cy="${sy(player.y)}" r="${fmt(0.9 * scale)}"/>`,
      );
    }
  }

  parts.push(
    `<circle class="ball" data-role="ball" data-x="${fmt(shot.location.x)}" data-y="${fmt(shot.location.y)}" ` +
      `cx="${sx(shot.location.x)}" cy="${sy(shot.location.y)}" r="${fmt(0.6 * scale)}"/>`,
  );
  parts.push('</svg>');
  return parts.join('');
}

export function missingFramePlaceholder(): string {
  return '<p class="placeholder">No freeze frame was recorded for this shot, so player positions cannot be drawn.</p>';
}
