export class UndecodableVideo extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'UndecodableVideo';
  }
}

export class ModelUnavailable extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'ModelUnavailable';
  }
}
