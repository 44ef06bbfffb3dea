/** A job that cannot run: bad parameters or an encoder that cannot be built. */
export class ExportJobError extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'ExportJobError';
  }
}

/** Input that does not conform to the dataset JSON Lines format. */
export class DataFormatError extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'DataFormatError';
  }
}
