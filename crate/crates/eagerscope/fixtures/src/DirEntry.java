public class DirEntry {
    private long size;

    public DirEntry() {
    }

    public void setSize(long size) {
        this.size = size;
    }

    public long getSize() {
        return size;
    }

    public boolean equals(Object other) {
        if (!(other instanceof DirEntry)) {
            return false;
        }
        return this.size == ((DirEntry) other).size;
    }
}
