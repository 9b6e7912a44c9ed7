/** Wire types for the game service. The console renders these documents
 * verbatim; every judgement (legality, progress, winning) arrives
 * precomputed from the server. */

export type MoveKind = "N_REQUEST" | "P_REQUEST" | "CHALLENGE" | "ACCEPT";

export interface MoveDoc {
  kind: MoveKind;
  features?: string[];
  literals?: Record<string, boolean>;
}

export interface ReplyDoc {
  kind: "PROPOSE" | "CORRECT" | "CONFIRM" | "EXHAUSTED" | "ACK";
  transformation?: { set: Record<string, boolean> };
  label?: string;
  literals?: Record<string, boolean>;
  note?: string;
}

export interface TranscriptEntry {
  move: MoveDoc;
  reply: ReplyDoc;
  counters: { explainee_moves: number };
}

export interface ConundrumDoc {
  kind: "CI" | "CM";
  attended?: string[];
  mistaken?: string[];
  believed?: Record<string, boolean>;
}

export interface FactorDoc {
  name: string;
  set: Record<string, boolean>;
}

export interface SessionState {
  id: string;
  scenario: string | null;
  status: "open" | "won" | "abandoned";
  variant: "restriction" | "forcing" | "challenge";
  features: string[];
  labels: string[];
  focal: Record<string, boolean>;
  focal_label: string;
  target: string;
  radius: number;
  conundrum: ConundrumDoc | null;
  factors: FactorDoc[];
  legal_moves: MoveKind[];
  progress: Record<string, boolean>;
  transcript: TranscriptEntry[];
  proposed: Array<{ set: Record<string, boolean>; label?: string }>;
  counters: { explainee_moves: number; adversary_oracle_calls: number };
}

export interface MoveResult {
  move: MoveDoc;
  reply: ReplyDoc;
  state: SessionState;
}

export interface ScenarioCard {
  name: string;
  summary: string;
  suggested_policy: string;
  variant: string;
  features: string[];
  labels: string[];
  focal: Record<string, boolean>;
  focal_label: string;
  target: string;
  radius: number;
  conundrum: ConundrumDoc | null;
  factors: FactorDoc[];
}
