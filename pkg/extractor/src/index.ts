export { Classifier, ClassifierOptions, Normalization, TfjsClassifier } from './classifier.js';
export { ModelUnavailable, UndecodableVideo } from './errors.js';
export { extract, ExtractionConfig, ExtractionResult, REQUIRED_LABELS } from './extract.js';
export { decodeFrnk, encodeFrnk, FRNK_MAGIC, FRNK_VERSION, FrnkHeader, HEADER_BYTES } from './frnk.js';
export { parseY4M, resizeToInput, Y4MVideo } from './y4m.js';
export { runCli } from './cli.js';
