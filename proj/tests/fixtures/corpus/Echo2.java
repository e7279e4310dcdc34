package fixture.queue;

public class Echo2 {
  public boolean dropQueueEntry(QueueStore store, long recordId) {
    QueueEntry entry = store.find(recordId);
    if (entry == null) {
      return false;
    }
    store.remove(recordId);
    store.compact();
    long remaining = store.size();
    if (remaining == 0) {
      store.markIdle();
    }
    store.publish(recordId);
    LOG.info("queue entry successfully deleted");
    return true;
  }
}
