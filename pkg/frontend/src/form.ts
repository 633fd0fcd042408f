/** Strategy form state and client-side validation mirroring server preconditions. */

export interface StrategyForm {
  product: string;
  capacity: number;
  batch: number;
  rate: number;
  threshold: number;
  unit: string;
  sweepRates: number[];
}

export const RATE_SLIDER = { min: 0.05, max: 1.0, step: 0.05 };

export const DEFAULT_FORM: StrategyForm = {
  product: "",
  capacity: 100,
  batch: 10,
  rate: 0.25,
  threshold: 70,
  unit: "hours",
  sweepRates: [0.25, 0.3, 0.35, 0.4],
};

export type FormErrors = Partial<Record<keyof StrategyForm, string>>;

/** Empty result means the form may be submitted. */
export function validateForm(form: StrategyForm): FormErrors {
  const errors: FormErrors = {};
  if (!form.product) {
    errors.product = "pick a product";
  }
  if (!Number.isInteger(form.capacity) || form.capacity < 1) {
    errors.capacity = "capacity must be a positive integer";
  }
  if (!Number.isInteger(form.batch) || form.batch < 1) {
    errors.batch = "batch must be a positive integer";
  } else if (Number.isInteger(form.capacity) && form.batch > form.capacity) {
    errors.batch = "batch cannot exceed capacity";
  }
  if (!(form.rate > 0)) {
    errors.rate = "supply rate must be > 0";
  }
  if (!Number.isInteger(form.threshold) || form.threshold < 0) {
    errors.threshold = "threshold must be a non-negative integer";
  } else if (Number.isInteger(form.capacity) && form.threshold > form.capacity) {
    errors.threshold = "threshold cannot exceed capacity";
  }
  if (form.sweepRates.length === 0) {
    errors.sweepRates = "need at least one sweep rate";
  } else if (form.sweepRates.some((r) => !(r > 0))) {
    errors.sweepRates = "sweep rates must all be > 0";
  }
  return errors;
}

export function isValid(form: StrategyForm): boolean {
  return Object.keys(validateForm(form)).length === 0;
}
