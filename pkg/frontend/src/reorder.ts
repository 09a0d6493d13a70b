// HTML5 drag-and-drop reordering for the segment tag list. The list
// items carry data-index; the container gets one delegated set of
// listeners so re-renders don't leak handlers.

export function attachDragReorder(
  container: HTMLElement,
  itemSelector: string,
  onMove: (from: number, to: number) => void,
): void {
  let fromIndex = -1;

  const indexOf = (target: EventTarget | null): number => {
    const item = (target as Element | null)?.closest?.(itemSelector);
    if (!item || !container.contains(item)) return -1;
    return Number((item as HTMLElement).dataset.index ?? -1);
  };

  container.addEventListener('dragstart', (e) => {
    fromIndex = indexOf(e.target);
    const dt = (e as DragEvent).dataTransfer;
    if (dt) dt.effectAllowed = 'move';
  });

  container.addEventListener('dragover', (e) => {
    if (fromIndex >= 0) e.preventDefault();
  });

  container.addEventListener('drop', (e) => {
    e.preventDefault();
    const to = indexOf(e.target);
    if (fromIndex >= 0 && to >= 0 && to !== fromIndex) {
      onMove(fromIndex, to);
    }
    fromIndex = -1;
  });

  container.addEventListener('dragend', () => {
    fromIndex = -1;
  });
}
