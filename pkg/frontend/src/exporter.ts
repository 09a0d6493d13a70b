// Export hands out exactly the text the service last returned.
// Any drift between the preview and the exported bytes is a bug.

export class Exporter {
  private text = '';

  setText(text: string): void {
    this.text = text;
  }

  get current(): string {
    return this.text;
  }

  get empty(): boolean {
    return this.text === '';
  }

  async copy(): Promise<void> {
    if (this.empty) throw new Error('nothing to export');
    await navigator.clipboard.writeText(this.text);
  }

  download(chartId: string, doc: Document = document): void {
    if (this.empty) throw new Error('nothing to export');
    const blob = new Blob([this.text], { type: 'text/plain;charset=utf-8' });
    const url = URL.createObjectURL(blob);
    const a = doc.createElement('a');
    a.href = url;
    a.download = `${chartId}-description.txt`;
    doc.body.appendChild(a);
    a.click();
    a.remove();
    URL.revokeObjectURL(url);
  }
}
